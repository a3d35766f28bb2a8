#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bistochastic"))
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

/// A 60-record dataset with two categorical and one numerical column, plus a
/// schema, matrices and a config that anonymizes every column.
pub fn fixture(dir: &Path) {
    let colors = ["red", "green", "blue"];
    let sizes = ["s", "m", "l", "xl"];
    let mut csv = String::from("color,size,income\n");
    for i in 0..60usize {
        let income = 1000.0 + (i * 37 % 61) as f64 * 12.5;
        csv.push_str(&format!(
            "{},{},{}\n",
            colors[i * 7 % 3],
            sizes[i * 5 % 4],
            income
        ));
    }
    write(dir, "data.csv", &csv);
    write(
        dir,
        "schema.toml",
        "[[columns]]\nname = \"color\"\nkind = \"categorical\"\nlevels = [\"red\", \"green\", \"blue\"]\n\n\
         [[columns]]\nname = \"size\"\nkind = \"categorical\"\n\n\
         [[columns]]\nname = \"income\"\nkind = \"numerical\"\n",
    );
    assert!(run_in(
        dir,
        &[
            "build",
            "dp",
            "--size",
            "3",
            "--epsilon",
            "1",
            "--out",
            "color.csv"
        ]
    )
    .status
    .success());
    assert!(run_in(
        dir,
        &[
            "build",
            "circulant",
            "--size",
            "4",
            "--p11",
            "0.7",
            "--out",
            "size.csv"
        ]
    )
    .status
    .success());
    assert!(run_in(
        dir,
        &[
            "build",
            "dp",
            "--size",
            "60",
            "--epsilon",
            "3",
            "--out",
            "income.csv"
        ]
    )
    .status
    .success());
    write(
        dir,
        "config.toml",
        "[[columns]]\nname = \"color\"\nmatrix = \"color.csv\"\n\n\
         [[columns]]\nname = \"size\"\nmatrix = \"size.csv\"\n\n\
         [[columns]]\nname = \"income\"\nmatrix = \"income.csv\"\nmode = \"permute\"\n",
    );
}

pub fn anonymize(dir: &Path, out: &str, seed: &str, extra: &[&str]) -> Output {
    let mut args = vec![
        "anonymize",
        "--data",
        "data.csv",
        "--schema",
        "schema.toml",
        "--config",
        "config.toml",
        "--seed",
        seed,
        "--out",
        out,
    ];
    args.extend_from_slice(extra);
    run_in(dir, &args)
}
