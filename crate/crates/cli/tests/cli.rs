use clap::Parser;
use serde_json::Value;
use superdirac_cli::{execute, parse_config, Cli};

fn call(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["superdirac"];
    argv.extend_from_slice(args);
    execute(&Cli::try_parse_from(argv).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn check_passes() {
    let (code, text) = call(&["check", "--algebra", "sl3"]);
    assert_eq!(code, 0, "{}", text);
    assert_eq!(json(&text)["passed"], Value::Bool(true));
}

#[test]
fn chern_csv_matches_sinh() {
    let (code, text) = call(&["chern", "--algebra", "sl2", "--hw", "3,0", "--order", "5", "--format", "csv"]);
    assert_eq!(code, 0, "{}", text);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows, ["multidegree,num,den", "1,1,1", "3,1,24", "5,1,1920"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["laplace", "--algebra", "psl(2|2)", "--hw", "1,0,0,-1", "--xi=-2,0,0,2", "--grid", "1/2,1"];
    let first = call(&args);
    for threads in ["1", "3"] {
        std::env::set_var("SUPERDIRAC_THREADS", threads);
        assert_eq!(call(&args), first);
    }
    std::env::remove_var("SUPERDIRAC_THREADS");
}

#[test]
fn errors_carry_module_codes() {
    let (code, text) = call(&["dirac-cohomology", "--algebra", "sl(2|1)", "--hw", "0,0,0", "--l", "h"]);
    assert_eq!(code, 2);
    assert_eq!(json(&text)["error"]["code"], "dirac-family/kernel-infinite");
    let (code, text) = call(&["module", "--algebra", "sl2"]);
    assert_eq!(code, 2);
    assert!(json(&text)["error"]["code"].as_str().unwrap().starts_with("cli/"));
    let (code, _) = call(&["ds", "--algebra", "sl(2|1)", "--hw", "1,0,0", "--x", "E13"]);
    assert_eq!(code, 0);
    let (code, text) = call(&["ds", "--algebra", "sl(2|1)", "--hw", "1,0,0", "--x", "E12"]);
    assert_eq!(code, 2, "{}", text);
}

#[test]
fn config_file_and_flag_precedence() {
    let c = parse_config("# job\ncommand = heat\nalgebra = sl3\nhw = 1,0,-1\n\norder = 4 # inline\n").unwrap();
    assert_eq!(c["algebra"], "sl3");
    assert_eq!(c["order"], "4");
    assert!(parse_config("colour = red\n").is_err());
    assert!(parse_config("no separator\n").is_err());
    let dir = std::env::temp_dir().join(format!("superdirac-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.cfg");
    std::fs::write(&path, "command = heat\nalgebra = sl3\nhw = 1,0,-1\n").unwrap();
    let (code, text) = call(&["--config", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", text);
    assert_eq!(json(&text)["command"], "heat");
    let (code, text) = call(&["module", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", text);
    assert_eq!(json(&text)["command"], "module");
    std::fs::remove_dir_all(&dir).unwrap();
}
