use mindisc_wasm::{blowup_json, bound_json, cdv_json};
use serde_json::Value;

fn doc(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn bound_on_cd4() {
    let d = doc(bound_json("y1,y2,y3,t", "y1^2 + y2*y3^2 + y3^3", "2,1,1", "").unwrap());
    assert_eq!(d["A"], 3);
    assert_eq!(d["phi"], "u2*u3^2 + u3^3");
    assert_eq!(d["d"], 1);
    let d = doc(bound_json("y1,y2,y3,t", "y1^2 + y2*y3^2 + y3^3", "1,1,1", "t").unwrap());
    assert_eq!(d["d"], Value::Null);
}

#[test]
fn bad_input_is_an_error() {
    assert!(bound_json("y1,t", "y1 +", "1", "").unwrap_err().contains("offset"));
    assert!(bound_json("y1,t", "y1^2", "x", "").is_err());
    assert!(bound_json("y1,t", "y1^2", "1", "s").is_err());
    assert!(cdv_json("y1,y2,y3,t", "y1^2 + y2^2 + y3^2 + t").is_err());
}

#[test]
fn cdv_returns_text_and_json() {
    let d = doc(cdv_json("y1,y2,y3,t", "y1^2 + y2^3 + y3^4 + t*(3*y2^2 + 3*t*y2 + t^2)").unwrap());
    assert!(d["text"].as_str().unwrap().contains("E6"));
    assert!(d["json"].as_str().unwrap().contains("complete_cube"));
}

#[test]
fn walk_lines() {
    let script = "state n=3\ndivisor 1 coeff=0 over=1\ndivisor 2 coeff=-2\nmeet 1,2\nwalk i=1 j=2 steps=3\n";
    let d = doc(blowup_json(script).unwrap());
    assert_eq!(d["lines"][0], "walk: 3:-1 4:-2 5:-3");
}
