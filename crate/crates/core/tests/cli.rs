//! The `unirank` binary end to end: exit codes, messages and output files.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{copy_dir, fixture};

fn unirank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unirank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(config: &Path, command: &str, out: &Path) -> Output {
    unirank(&[
        command,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn validate_reports_the_three_unassigned_records() {
    let out = unirank(&[
        "validate",
        "--config",
        fixture("demo/unirank.toml").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    let mut ids: Vec<&str> = stdout
        .lines()
        .filter_map(|l| l.trim().strip_prefix("unassigned: "))
        .collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids, ["R06449", "R06450", "R06451"]);
    assert!(stdout.contains("publications: 6451"));
    assert!(stdout.contains("unresolved journals: 0"));
}

#[test]
fn malformed_row_names_its_line() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&fixture("demo"), dir.path());
    let pubs = dir.path().join("publications.csv");
    let mut lines: Vec<String> = std::fs::read_to_string(&pubs)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    lines[56] = "R99999,Granada,2010,J001,many".to_string();
    std::fs::write(&pubs, lines.join("\n") + "\n").unwrap();

    let out = unirank(&[
        "validate",
        "--config",
        dir.path().join("unirank.toml").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = text(&out.stderr);
    assert!(stderr.contains(":57:"), "{stderr}");
    assert!(stderr.contains("many"), "{stderr}");
}

#[test]
fn unknown_journal_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&fixture("demo"), dir.path());
    let pubs = dir.path().join("publications.csv");
    let mut body = std::fs::read_to_string(&pubs).unwrap();
    body.push_str("R99999,Granada,2010,J404,3\n");
    std::fs::write(&pubs, body).unwrap();

    let out = unirank(&[
        "validate",
        "--config",
        dir.path().join("unirank.toml").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stdout).contains("record R99999 -> journal J404"));
}

#[test]
fn configuration_problems_exit_with_2() {
    let out = unirank(&["rank", "--config", "/nonexistent/unirank.toml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = unirank(&["rank"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "publications = \"p.csv\"\nwindows = [\"2012:2008\"]\n",
    )
    .unwrap();
    assert_eq!(
        unirank(&["rank", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&cfg, "publications = \"missing.csv\"\njournals = \"j.csv\"\ntaxonomy = \"t.csv\"\nwindows = [\"2008:2012\"]\n").unwrap();
    let out = unirank(&["rank", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("missing.csv"));
}

#[test]
fn rank_writes_both_windows_per_field() {
    let out_dir = tempfile::tempdir().unwrap();
    let out = run(&fixture("demo/unirank.toml"), "rank", out_dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    for kind in ["ranking", "quadrants", "indicators"] {
        for w in ["w5", "w10"] {
            assert!(
                out_dir
                    .path()
                    .join(format!("{kind}_mathematics_{w}.csv"))
                    .is_file(),
                "{kind} {w}"
            );
        }
    }
    // Arts & Humanities has no papers and is skipped, not an error
    assert!(!out_dir
        .path()
        .join("ranking_arts_humanities_w5.csv")
        .exists());
    assert!(text(&out.stderr).contains("Arts & Humanities"));

    let rows = data_rows(&out_dir.path().join("ranking_chemistry_w10.csv"));
    let ranks: Vec<u32> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(ranks[0], 1);
    assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn quadrant_writes_only_scatter_files() {
    let out_dir = tempfile::tempdir().unwrap();
    let out = run(&fixture("demo/unirank.toml"), "quadrant", out_dir.path());
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = common::read_outputs(out_dir.path()).into_keys().collect();
    assert!(!names.is_empty());
    assert!(
        names.iter().all(|n| n.starts_with("quadrants_")),
        "{names:?}"
    );
}

#[test]
fn window_flag_overrides_the_config() {
    let out_dir = tempfile::tempdir().unwrap();
    let out = unirank(&[
        "rank",
        "--config",
        fixture("demo/unirank.toml").to_str().unwrap(),
        "--out",
        out_dir.path().to_str().unwrap(),
        "--window",
        "2010:2012",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = common::read_outputs(out_dir.path()).into_keys().collect();
    assert!(names.iter().all(|n| n.ends_with("_w3.csv")), "{names:?}");
}

/// Three institutions in one field, checked against values worked out by
/// hand. Citation pool [10, 4, 2, 6, 6, 1]: one top paper, threshold 10.
#[test]
fn three_institutions_by_hand() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("publications.csv"),
        "record_id,institution_id,year,journal_id,citations\n\
         a1,U1,2010,JA,10\na2,U1,2010,JB,4\na3,U1,2010,JB,2\n\
         b1,U2,2010,JA,6\nb2,U2,2010,JA,6\n\
         c1,U3,2010,JB,1\n",
    )
    .unwrap();
    std::fs::write(
        d.join("journals.csv"),
        "journal_id,category,year,quartile\nJA,Cat,2010,1\nJB,Cat,2010,2\n",
    )
    .unwrap();
    std::fs::write(
        d.join("taxonomy.csv"),
        "field_name,level,category\nF,field,cat\n",
    )
    .unwrap();
    std::fs::write(
        d.join("unirank.toml"),
        "publications = \"publications.csv\"\njournals = \"journals.csv\"\ntaxonomy = \"taxonomy.csv\"\nwindows = [\"2010:2010\"]\n",
    )
    .unwrap();

    let out = run(&d.join("unirank.toml"), "rank", &d.join("out"));
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));

    let ind = data_rows(&d.join("out/indicators_f_w1.csv"));
    let ind: Vec<Vec<&str>> = ind
        .iter()
        .map(|r| r.iter().map(String::as_str).collect())
        .collect();
    assert_eq!(
        ind,
        [
            ["F", "U1", "3", "16", "2", "0.333333", "5.333333", "0.333333"],
            ["F", "U2", "2", "12", "2", "1.000000", "6.000000", "0.000000"],
            ["F", "U3", "1", "1", "1", "0.000000", "1.000000", "0.000000"],
        ]
    );

    // U1: qnif = 96^(1/3), qlif = (16/27)^(1/3); U2 and U3 have qlif 0 and tie
    let rows = data_rows(&d.join("out/ranking_f_w1.csv"));
    let ranking: Vec<(&str, &str)> = rows
        .iter()
        .map(|r| (r[2].as_str(), r[3].as_str()))
        .collect();
    assert_eq!(ranking, [("U1", "1"), ("U2", "2"), ("U3", "2")]);
    let ifq2a: f64 = rows[0][4].parse().unwrap();
    assert!((ifq2a - (96.0f64 * 16.0 / 27.0).powf(1.0 / 3.0)).abs() < 1e-6);

    let quad = data_rows(&d.join("out/quadrants_f_w1.csv"));
    let labels: Vec<&str> = quad.iter().map(|r| r[5].as_str()).collect();
    assert_eq!(labels, ["both_outstanding", "quantitative_only", "neither"]);
    let mean_qnif: f64 = quad[0][6].parse().unwrap();
    let expected = (96f64.powf(1.0 / 3.0) + 48f64.powf(1.0 / 3.0) + 1.0) / 3.0;
    assert!((mean_qnif - expected).abs() < 1e-6);
}

#[test]
fn compare_writes_one_report_per_system_pair() {
    let out_dir = tempfile::tempdir().unwrap();
    let out = run(&fixture("demo/unirank.toml"), "compare", out_dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let names: Vec<String> = common::read_outputs(out_dir.path()).into_keys().collect();
    assert_eq!(
        names,
        [
            "concordance_leiden_vs_i_ugr.csv",
            "concordance_ntu_vs_i_ugr.csv",
            "concordance_qs_vs_i_ugr.csv",
            "concordance_shanghai_vs_i_ugr.csv",
        ]
    );
    let body = std::fs::read_to_string(out_dir.path().join("concordance_qs_vs_i_ugr.csv")).unwrap();
    assert_eq!(
        data_rows(&out_dir.path().join("concordance_qs_vs_i_ugr.csv")).len(),
        7
    );
    assert!(body.contains("# aggregate_pooled="));
    assert!(body.contains("# aggregate_mean_of_fractions="));
}

fn comparison_dir(rankings: &str, crosswalk: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("rankings.csv"), rankings).unwrap();
    std::fs::write(dir.path().join("crosswalk.csv"), crosswalk).unwrap();
    std::fs::write(
        dir.path().join("unirank.toml"),
        "external_rankings = [\"rankings.csv\"]\ncrosswalk = \"crosswalk.csv\"\n",
    )
    .unwrap();
    dir
}

#[test]
fn identical_tables_agree_perfectly() {
    let mut rankings = String::from("system_name,field_name,institution_id,rank\n");
    for sys in ["Intl", "Natl"] {
        for (i, id) in ["a", "b", "c", "d", "e"].iter().enumerate() {
            rankings.push_str(&format!("{sys},Physics,{id},{}\n", i + 1));
        }
    }
    let dir = comparison_dir(
        &rankings,
        "source_system,source_field,target_system,target_field\nIntl,Physics,Natl,Physics\n",
    );
    let out = run(
        &dir.path().join("unirank.toml"),
        "compare",
        &dir.path().join("out"),
    );
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let rows = data_rows(&dir.path().join("out/concordance_intl_vs_natl.csv"));
    assert_eq!(
        rows,
        [["Physics", "Physics", "5", "1.000", "5", "5", "1.000000"]]
    );
}

#[test]
fn crosswalk_to_a_missing_field_fails() {
    let rankings =
        "system_name,field_name,institution_id,rank\nIntl,Physics,a,1\nNatl,Physics,a,1\n";
    let dir = comparison_dir(
        rankings,
        "source_system,source_field,target_system,target_field\nIntl,Physics,Natl,Astronomy\n",
    );
    let out = run(
        &dir.path().join("unirank.toml"),
        "compare",
        &dir.path().join("out"),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(
        text(&out.stderr).contains("Natl/Astronomy"),
        "{}",
        text(&out.stderr)
    );
}

#[test]
fn small_pairs_are_starred() {
    let rankings = "system_name,field_name,institution_id,rank\nIntl,Physics,a,10\nIntl,Physics,b,20\nNatl,Physics,a,1\nNatl,Physics,b,2\nNatl,Physics,c,3\n";
    let dir = comparison_dir(
        rankings,
        "source_system,source_field,target_system,target_field\nIntl,Physics,Natl,Physics\n",
    );
    let out = run(
        &dir.path().join("unirank.toml"),
        "compare",
        &dir.path().join("out"),
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = data_rows(&dir.path().join("out/concordance_intl_vs_natl.csv"));
    assert_eq!(
        rows,
        [["Physics", "Physics", "2", "*", "2", "2", "1.000000"]]
    );
}
