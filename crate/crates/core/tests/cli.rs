use refcosets::cli::run;
use refcosets::cyclo::RootOfUnity;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["refcosets"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn root(v: &Value) -> RootOfUnity {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn factors_3d4_json() {
    let (code, out) = call(&["factors", "3D4", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let f = v["factors"].as_array().unwrap();
    let d: Vec<i64> = f.iter().map(|x| x["d"].as_i64().unwrap()).collect();
    assert_eq!(d, vec![2, 4, 4, 6]);
    let eps: Vec<RootOfUnity> = f.iter().map(|x| root(&x["eps"])).collect();
    assert_eq!(eps, vec![RootOfUnity::ONE, RootOfUnity::new(3, 1), RootOfUnity::new(3, 2), RootOfUnity::ONE]);
}

#[test]
fn regular_2f4_orders() {
    let (code, out) = call(&["regular", "2F4"]);
    assert_eq!(code, 0);
    assert!(out.contains("orders: 1 2 4 8 12 24"), "{out}");
}

#[test]
fn regular_single_root() {
    let (code, out) = call(&["regular", "2G5", "--zeta", "1/8", "--oracle"]);
    assert_eq!(code, 0);
    assert!(out.contains(": regular"), "{out}");
    assert!(out.contains("witness element"), "{out}");
    let (code, out) = call(&["regular", "2G5", "--zeta", "z4^1", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["criterion"], Value::Bool(false));
    assert!(v["report"]["oracle"].is_null());
}

#[test]
fn verify_twistpw_untwisted() {
    let (code, out) = call(&["verify", "G(4,2,2;zeta=1)", "--identity", "twistpw"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("twistpw: pass"));
}

#[test]
fn verify_all_small() {
    let (code, out) = call(&["verify", "3G422", "--all"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("regularity (criterion, oracle, ideal): orders 1 2 3 4 6 12"), "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["factors", "X9"]).0, 2);
    let (code, out) = call(&["factors", "X9", "--json"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "usage");
    assert_eq!(call(&["verify", "A2"]).0, 2);
    assert_eq!(call(&["regular", "A2", "--zeta", "abc"]).0, 2);
    assert_eq!(call(&["factors", "A2", "--module", "W"]).0, 2);
    assert_eq!(call(&["verify", "A2", "--identity", "nope"]).0, 2);
    assert_eq!(call(&["verify", "G(4,2,2)", "--identity", "sigma", "--sigma", "2"]).0, 2);
    assert_eq!(call(&["coinv", "A2", "--induction", "--gamma", "99"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    let (code, out) = call(&["frobnicate", "--json"]);
    assert_eq!(code, 2);
    assert!(serde_json::from_str::<Value>(&out).unwrap()["error"].is_object());
}

#[test]
fn table_named_schema_and_determinism() {
    let (code, out) = call(&["table", "--family", "named", "--json"]);
    assert_eq!(code, 0);
    let rows: Vec<Value> = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.len(), 7);
    for r in &rows {
        for f in ["key", "degrees", "codegrees", "regular", "flags"] {
            assert!(r.get(f).is_some(), "{f} missing");
        }
        for e in r["degrees"].as_array().unwrap() {
            assert!(e["d"].is_i64());
            root(&e["eps"]);
        }
    }
    let g333 = rows.iter().find(|r| r["key"] == "4G333").unwrap();
    assert!(g333["flags"].as_array().unwrap().iter().any(|f| f.as_str().unwrap().contains("4,4,6")));
    let (_, again) = call(&["table", "--family", "named", "--json"]);
    assert_eq!(out, again);
    let (_, text) = call(&["table", "--family", "named"]);
    assert!(text.lines().next().unwrap().starts_with("coset"));
}

#[test]
fn harmonics_checks() {
    let (code, out) = call(&["harmonics", "G(4,2,2)", "--check", "wellgen", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["wellgen"]["well_generated"], Value::Bool(false));
    assert_eq!(v["wellgen"]["min_generating_reflections"], 3);
    for check in ["gutkin", "discriminant", "wellgen", "factors"] {
        let (code, out) = call(&["harmonics", "2G5", "--check", check]);
        assert_eq!(code, 0, "{check}: {out}");
    }
}

#[test]
fn coinv_commands() {
    let (code, out) = call(&["coinv", "G(1,1,3)"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("dims [1, 2, 2, 1]"), "{out}");
    for c in 0..3 {
        for k in 0..3 {
            let (code, out) = call(&["coinv", "A2", "--induction", "--gamma", &c.to_string(), "--k", &k.to_string()]);
            assert_eq!(code, 0, "{out}");
            assert!(out.contains("pass"));
        }
    }
}

#[test]
fn cache_roundtrip() {
    let dir = std::env::temp_dir().join(format!("refcosets-cache-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let (_, first) = call(&["factors", "2G5", "--cache", d]);
    let file = dir.join("2G5.json");
    let body: Value = serde_json::from_slice(&std::fs::read(&file).unwrap()).unwrap();
    assert_eq!(body["version"], 1);
    assert_eq!(body["key"], "2G5");
    assert_eq!(body["elements"].as_array().unwrap().len(), 72);
    let (code, second) = call(&["factors", "2G5", "--cache", d]);
    assert_eq!(code, 0);
    assert_eq!(first, second);
    std::fs::write(&file, b"{\"version\": 0}").unwrap();
    assert_eq!(call(&["factors", "2G5", "--cache", d]).1, first);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn conductor_override() {
    assert_eq!(call(&["verify", "G(4,2,2)", "--all", "--conductor", "8"]).0, 0);
    assert_eq!(call(&["verify", "G(4,2,2)", "--all", "--conductor", "6"]).0, 2);
}

#[test]
fn catalog_lists_named_keys() {
    let (code, out) = call(&["catalog"]);
    assert_eq!(code, 0);
    for k in ["4G333", "2G333", "3G422", "2G5", "2G7", "3D4", "2F4"] {
        assert!(out.contains(k));
    }
}
