use coverkit_wasm::demo;
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn configuration_view() {
    let v = parse(demo::build_configuration("preset:diamond", 2, 2, true).unwrap());
    assert_eq!(v["homothets"], 5);
    assert_eq!(v["property1"]["mode"], "exhaustive");
    assert_eq!(v["property1"]["colorings"], 32);
    assert_eq!(v["property1"]["passed"], true);
    assert!(v["svg"].as_str().unwrap().starts_with("<?xml"));
    let big = parse(demo::build_configuration("preset:trapezoid", 4, 4, false).unwrap());
    assert_eq!(big["homothets"], 69);
    assert_eq!(big["property1"]["mode"], "certificate");
    assert_eq!(big["property1"]["passed"], true);
}

#[test]
fn custom_vertices() {
    let v = parse(demo::build_configuration("-1,1; 1,1 1,-1 -1,-1", 1, 2, false).unwrap());
    assert_eq!(v["homothets"], 2);
    assert!(demo::build_configuration("0,0 1,0 0,1", 1, 1, false).unwrap_err().contains("TooFewSides"));
    assert!(demo::build_configuration("preset:diamond", 0, 1, false).is_err());
    assert!(demo::build_configuration("preset:diamond", 9, 1, false).is_err());
}

#[test]
fn dual_view() {
    let v = parse(demo::dual_scene("preset:pentagon", 2, "1/10", false).unwrap());
    assert_eq!(v["inflated"], 5);
    assert_eq!(v["points"], 6);
    assert_eq!(v["nondecomposable"], true);
    assert_eq!(v["svg"].as_str().unwrap().matches("<path").count(), 6);
}

#[test]
fn query_view() {
    let v = parse(demo::query("preset:diamond", "1", "1", "0,0", "2,0").unwrap());
    assert_eq!((v["contains"].as_bool(), v["intersect"].as_bool()), (Some(true), Some(true)));
    let v = parse(demo::query("preset:diamond", "1", "1", "0,0", "2,1/7").unwrap());
    assert_eq!((v["contains"].as_bool(), v["intersect"].as_bool()), (Some(false), Some(false)));
    assert!(demo::query("preset:diamond", "-1", "1", "0,0", "0,0").is_err());
    assert!(demo::query("preset:diamond", "1", "1", "0;0", "0,0").is_err());
}
