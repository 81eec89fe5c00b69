use uflp_vqa::instance_file::{load_instance, parse_instance, save_instance, InstanceFileError};
use uflp_vqa_core::registry;

#[test]
fn registry_instance_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("instance-07.json");
    let inst = registry::by_key("instance-07").unwrap();
    save_instance(&inst, &path).unwrap();
    assert_eq!(load_instance(&path).unwrap(), inst);
}

#[test]
fn lambda_survives_the_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let mut inst = registry::instance(2).unwrap();
    inst.penalty = Some(12.5);
    save_instance(&inst, &path).unwrap();
    let back = load_instance(&path).unwrap();
    assert_eq!(back.penalty, Some(12.5));
    assert_eq!(back.resolved_penalty(), 12.5);
}

#[test]
fn negative_service_cost_names_the_field() {
    let err = parse_instance(
        r#"{"name":"x","m":2,"n":2,"D":[[1,2],[3,-4]],"G":[1,1]}"#,
        "x.json",
    )
    .unwrap_err();
    match &err {
        InstanceFileError::Invalid { field, message, .. } => {
            assert_eq!(*field, "D");
            assert!(message.contains("D[1][1]"), "{message}");
        }
        other => panic!("unexpected error {other}"),
    }
    assert!(err.to_string().contains("x.json"));
}

#[test]
fn row_count_must_match_m() {
    let err = parse_instance(
        r#"{"name":"x","m":3,"n":2,"D":[[1,2],[3,4]],"G":[1,1]}"#,
        "x.json",
    )
    .unwrap_err();
    assert!(matches!(err, InstanceFileError::Invalid { field: "D", .. }));
    assert!(err.to_string().contains("m = 3"));
}

#[test]
fn opening_costs_must_match_n() {
    let err =
        parse_instance(r#"{"name":"x","m":1,"n":2,"D":[[1,2]],"G":[1]}"#, "x.json").unwrap_err();
    assert!(matches!(err, InstanceFileError::Invalid { field: "G", .. }));
}

#[test]
fn missing_file_and_bad_json_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert!(matches!(
        load_instance(&missing),
        Err(InstanceFileError::Read { .. })
    ));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert!(matches!(
        load_instance(&bad),
        Err(InstanceFileError::Parse { .. })
    ));
}
