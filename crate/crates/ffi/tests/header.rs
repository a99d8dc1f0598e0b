use std::path::Path;
use std::process::Command;

fn header() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/popmatch.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "pm_last_error",
        "pm_instance_parse",
        "pm_instance_free",
        "pm_solve",
        "pm_matching_parse",
        "pm_matching_free",
        "pm_matching_to_string",
        "pm_string_free",
        "pm_margin",
        "pm_is_popular",
        "typedef struct PmInstance PmInstance",
        "PM_STATUS_MODEL_VIOLATION = 5",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(header())
        .status()
    else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    assert!(status.success());
}
