use std::sync::Arc;

use dng_core::catalog::{catalog_up_to, quaternion_descriptor};
use dng_core::theory::Theorem;
use dng_core::verify::{
    render_report, verify_descriptors, verify_family, write_report, Family, LatticeCache, ReportFormat, VerifyOptions,
};
use dng_core::{build_group, SubgroupLattice, DEFAULT_ORDER_CAP};

fn untimed() -> VerifyOptions {
    VerifyOptions {
        timing: false,
        ..Default::default()
    }
}

#[test]
fn cyclic_family_rows() {
    let sweep = verify_family(&Family::Cyclic { min: 2, max: 20 }, &untimed());
    assert_eq!(sweep.rows.len(), 19);
    assert!(sweep.rows.iter().all(|r| r.agree == Some(true)));
    assert!(sweep.summary.all_clear());
    assert_eq!(sweep.summary.agreements, 19);
}

#[test]
fn dihedral_family_rows() {
    let sweep = verify_family(&Family::Dihedral { min: 3, max: 10 }, &untimed());
    assert_eq!(sweep.rows.len(), 8);
    assert!(sweep.rows.iter().all(|r| r.agree == Some(true)));
    assert!(sweep
        .rows
        .iter()
        .all(|r| r.covering.is_some() && r.theorem_gap.is_none()));
}

#[test]
fn symmetric_group_has_only_a_covering_constraint() {
    let sweep = verify_descriptors(&["perm:(1 2),(1 2 3 4)".into()], "explicit", &untimed());
    let row = &sweep.rows[0];
    assert_eq!(row.order, 24);
    assert!(!row.is_point_prediction());
    assert_eq!(row.prediction.as_ref().unwrap().theorem, Theorem::Covering);
    assert!(row.covering.is_some());
    assert_eq!(row.agree, Some(true));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let family = Family::Abelian { max: 24 };
    let a = verify_family(&family, &untimed());
    let b = verify_family(&family, &untimed());
    for format in [ReportFormat::Csv, ReportFormat::Json] {
        assert_eq!(
            render_report(&a.rows, format).unwrap(),
            render_report(&b.rows, format).unwrap()
        );
    }
}

#[test]
fn oracle_agrees_on_every_small_row() {
    let mut descriptors = catalog_up_to(16).unwrap();
    descriptors.push(quaternion_descriptor());
    let opts = VerifyOptions {
        oracle: true,
        ..untimed()
    };
    let sweep = verify_descriptors(&descriptors, "explicit", &opts);
    assert!(sweep.errors.is_empty(), "{:?}", sweep.errors);
    assert!(sweep.rows.iter().all(|r| r.oracle_agree == Some(true)));
    assert_eq!(sweep.summary.oracle_mismatches, 0);
}

#[test]
fn reports_written_to_disk() {
    let dir = tempfile::tempdir().unwrap();
    let rows = verify_family(&Family::Cyclic { min: 2, max: 2 }, &untimed()).rows;
    let csv = dir.path().join("r.csv");
    write_report(&rows, ReportFormat::Csv, &csv).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 2);
    let json = dir.path().join("r.json");
    write_report(&rows, ReportFormat::Json, &json).unwrap();
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 11);
    assert!(write_report(&rows, ReportFormat::Csv, &dir.path().join("missing/dir/r.csv")).is_err());
}

#[test]
fn lattice_cache_persists_and_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_group("dihedral:6", DEFAULT_ORDER_CAP).unwrap();
    let cache = LatticeCache::with_dir(dir.path());
    let first = cache.get_or_build(&g);
    let file = cache.file_for(g.descriptor()).unwrap();
    assert!(file.exists());

    let fresh = LatticeCache::with_dir(dir.path());
    let reloaded = fresh.get_or_build(&g);
    assert_eq!(reloaded.len(), first.len());
    assert_eq!(reloaded.maximal_ids(), SubgroupLattice::build(&g).maximal_ids());

    let opts = VerifyOptions {
        cache: Some(Arc::new(fresh)),
        ..untimed()
    };
    let sweep = verify_descriptors(&["dihedral:6".into()], "dihedral", &opts);
    assert_eq!(sweep.rows[0].subgroups, first.len());
}

#[test]
fn table_descriptor_loads_cayley_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z3.json");
    std::fs::write(
        &path,
        r#"{"name": "z3", "order": 3, "table": [[1,2,0],[2,0,1],[0,1,2]]}"#,
    )
    .unwrap();
    let g = build_group(&format!("table:{}", path.display()), DEFAULT_ORDER_CAP).unwrap();
    assert_eq!(g.order(), 3);
    assert!(build_group("table:/nonexistent/q.json", DEFAULT_ORDER_CAP).is_err());
}

#[test]
fn corrupt_cache_file_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_group("cyclic:12", DEFAULT_ORDER_CAP).unwrap();
    let cache = LatticeCache::with_dir(dir.path());
    let file = cache.file_for(g.descriptor()).unwrap();
    std::fs::write(&file, r#"{"descriptor":"cyclic:12","order":12,"subgroups":[[0],[0,1]]}"#).unwrap();
    assert_eq!(cache.get_or_build(&g).len(), 6);
}
