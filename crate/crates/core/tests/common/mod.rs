#![allow(dead_code)]

pub mod fixtures {
    use std::io::Write;
    use std::path::PathBuf;
    use std::process::{Command, Stdio};

    pub struct Case {
        pub dir: PathBuf,
        pub name: String,
        pub input: String,
        pub args: Vec<String>,
    }

    pub fn fixture_dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/cli")
    }

    pub fn load_cases() -> Vec<Case> {
        let dir = fixture_dir();
        let mut names: Vec<String> = std::fs::read_dir(&dir)
            .unwrap()
            .filter_map(|e| {
                let p = e.unwrap().path();
                (p.extension()? == "json").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
            })
            .collect();
        names.sort();
        names
            .into_iter()
            .map(|name| {
                let input = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
                let args = std::fs::read_to_string(dir.join(format!("{name}.args")))
                    .map(|s| s.split_whitespace().map(String::from).collect())
                    .unwrap_or_default();
                Case { dir: dir.clone(), name, input, args }
            })
            .collect()
    }

    pub fn run_case(case: &Case) -> (i32, String) {
        let mut child = Command::new(env!("CARGO_BIN_EXE_gausskit"))
            .args(&case.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .expect("spawn gausskit");
        child.stdin.take().unwrap().write_all(case.input.as_bytes()).unwrap();
        let out = child.wait_with_output().unwrap();
        (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
    }
}
