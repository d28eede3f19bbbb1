//! Golden-file cases shared by the integration tests and the acceptance
//! harness. Set `UPDATE_GOLDEN=1` to rewrite the expected files.

use std::fs;
use std::path::PathBuf;

pub const CASES: &[(&str, &str)] = &[
    ("check_identical5", "check --instance identical5.json"),
    ("check_general3", "check --instance general3.json"),
    ("reformable_balanced", "reformable --instance general3.json"),
    (
        "reformable_binary_sv",
        "reformable --instance binary3.json --size-vector 1,3,3",
    ),
    (
        "reformable_binary_no",
        "reformable --instance binary3.json --size-vector 0,0,7",
    ),
    (
        "reformable_two_agent",
        "reformable --instance two_agent_sv.json",
    ),
    (
        "reformable_oracle",
        "reformable --instance binary3.json --oracle",
    ),
    ("optimal_identical5", "optimal --instance identical5.json"),
    ("optimal_general3", "optimal --instance general3.json"),
    ("optimal_idenbin3", "optimal --instance idenbin3.json"),
    ("optimal_binary3", "optimal --instance binary3.json"),
    (
        "optimal_oracle",
        "optimal --instance identical3.json --oracle",
    ),
    ("bound_general_3_3", "bound --n 3 --s 3"),
    ("bound_general_4_5", "bound --n 4 --s 5"),
    (
        "bound_idenbin_3_3",
        "bound --n 3 --s 3 --family identical-binary",
    ),
    (
        "bound_idenbin_4_2",
        "bound --n 4 --s 2 --family identical-binary",
    ),
    ("bound_invalid", "bound --n 1 --s 2"),
    ("construct_general3", "construct --instance general3.json"),
    ("construct_idenbin3", "construct --instance idenbin3.json"),
    (
        "construct_identical5",
        "construct --instance identical5.json",
    ),
    ("construct_unbalanced", "construct --instance binary3.json"),
    ("weakef1_identical3", "weakef1 --instance identical3.json"),
    ("weakef1_idenbin3", "weakef1 --instance idenbin3.json"),
    ("weakef1_general", "weakef1 --instance general3.json"),
    ("beneficial_general3", "beneficial --instance general3.json"),
    ("beneficial_binary3", "beneficial --instance binary3.json"),
    (
        "beneficial_identical5",
        "beneficial --instance identical5.json",
    ),
    (
        "reduce_two_agent",
        "reduce --source source_bmp.json --target two-agent-general",
    ),
    (
        "reduce_identical_4",
        "reduce --source source_bmp.json --target identical-constant --agents 4",
    ),
    (
        "reduce_optimal_identical",
        "reduce --source source_bmp.json --target optimal-identical",
    ),
    (
        "reduce_x3c",
        "reduce --source source_x3c.json --target optimal-binary",
    ),
    (
        "reduce_coloring",
        "reduce --source source_coloring.json --target binary-general",
    ),
    (
        "reduce_mismatch",
        "reduce --source source_x3c.json --target beneficial",
    ),
    (
        "generate_general",
        "generate --n 3 --m 6 --seed 4 --size-vector 2,2,2",
    ),
    (
        "generate_idenbin",
        "generate --n 4 --m 8 --class identical-binary --seed 9",
    ),
    ("oracle_general3", "oracle --instance general3.json"),
    ("oracle_two_agent", "oracle --instance two_agent_sv.json"),
    (
        "oracle_budget",
        "oracle --instance idenbin3.json --budget 3",
    ),
    ("garbage", "reformable --instance garbage.bin"),
    ("bad_row", "check --instance bad_row.json"),
    ("missing_file", "check --instance nowhere.json"),
    ("no_instance", "optimal"),
    (
        "replay_misplaced",
        "optimal --instance identical5.json --replay identical5.json",
    ),
    ("unknown_subcommand", "frobnicate"),
];

pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn cli_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixtures() -> PathBuf {
    cli_dir().join("tests/fixtures")
}

/// Runs the program in-process. Bare `.json`/`.bin` arguments resolve
/// against the fixture directory.
pub fn run_args(args: &[String]) -> Outcome {
    let dir = fixtures();
    let mut argv = vec!["ef1reform".to_string()];
    argv.extend(args.iter().map(|a| {
        if !a.contains('/') && (a.ends_with(".json") || a.ends_with(".bin")) {
            dir.join(a).display().to_string()
        } else {
            a.clone()
        }
    }));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let status = ef1reform_cli::run(argv, &mut out, &mut err);
    Outcome {
        status,
        stdout: String::from_utf8(out).expect("stdout is UTF-8"),
        stderr: String::from_utf8(err).expect("stderr is UTF-8"),
    }
}

pub fn run_case(cmd: &str) -> Outcome {
    run_args(&cmd.split_whitespace().map(String::from).collect::<Vec<_>>())
}

/// What the golden file records: the status, the report, and for failures
/// the diagnostics with the fixture directory elided.
fn render(o: &Outcome) -> String {
    let mut s = format!("status: {}\n{}", o.status, o.stdout);
    if o.status != 0 {
        let dir = format!("{}/", fixtures().display());
        s.push_str("--- stderr\n");
        s.push_str(&o.stderr.replace(&dir, ""));
    }
    s
}

fn golden_path(name: &str) -> PathBuf {
    cli_dir().join("tests/golden").join(format!("{name}.out"))
}

/// Compares every case with its golden file, running each twice to catch
/// nondeterminism. Returns the names of failing cases.
pub fn check_goldens() -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut bad = Vec::new();
    for &(name, cmd) in CASES {
        let got = render(&run_case(cmd));
        if render(&run_case(cmd)) != got {
            bad.push(format!("{name}: differs between runs"));
            continue;
        }
        let path = golden_path(name);
        if update {
            fs::write(&path, &got).expect("write golden file");
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(want) if want == got => {}
            Ok(want) => bad.push(format!("{name}: expected\n{want}got\n{got}")),
            Err(_) => bad.push(format!("{name}: no golden file at {}", path.display())),
        }
    }
    bad
}

fn instance_arg(cmd: &str) -> Option<&str> {
    let mut words = cmd.split_whitespace();
    words.find(|&w| w == "--instance")?;
    words.next()
}

fn temp_trace(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!(
        "ef1reform-replay-{}-{name}.txt",
        std::process::id()
    ));
    fs::write(&path, text).expect("write trace file");
    path
}

/// Replays every trace printed by a successful case through
/// `check --replay` and compares with the verdict the case claimed.
/// Returns the number of replays and the failures.
pub fn check_replays() -> (usize, Vec<String>) {
    let mut count = 0;
    let mut bad = Vec::new();
    for &(name, cmd) in CASES {
        let sub = cmd.split_whitespace().next().unwrap_or_default();
        let claim = match sub {
            "optimal" | "construct" | "oracle" => "YES",
            "beneficial" => "YES",
            "weakef1" => "weak-ef1: YES",
            _ => continue,
        };
        let o = run_case(cmd);
        if o.status != 0 || (sub == "beneficial" && !o.stdout.starts_with("YES")) {
            continue;
        }
        if sub == "oracle" && !o.stdout.contains("min-exchanges") {
            continue;
        }
        let Some(inst) = instance_arg(cmd) else {
            continue;
        };
        let path = temp_trace(name, &o.stdout);
        let r = run_args(&[
            "check".into(),
            "--instance".into(),
            inst.into(),
            "--replay".into(),
            path.display().to_string(),
        ]);
        let _ = fs::remove_file(&path);
        count += 1;
        let steps = o.stdout.lines().filter(|l| is_trace_line(l)).count();
        let replayed = format!("replayed: {steps} exchanges");
        let ok = r.status == 0
            && r.stdout.lines().any(|l| l == claim)
            && r.stdout.lines().any(|l| l == replayed);
        if !ok {
            bad.push(format!("{name}: replay gave\n{}{}", r.stdout, r.stderr));
        }
    }
    (count, bad)
}

fn is_trace_line(l: &str) -> bool {
    l.split_once(": (")
        .is_some_and(|(t, _)| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()))
}
