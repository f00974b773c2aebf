use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gaitdom::mapping::{read_labels_csv, write_responses_csv, DominanceLabel};
use gaitdom::mocap::{save_gait, JointId};
use gaitdom::synth::{reference_pose, simulate_ratings, synthetic_corpus, RaterPanel};

fn gaitdom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaitdom")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = gaitdom(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn unknown_subcommand_exits_2_with_usage() {
    let out = gaitdom(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn failures_print_one_error_line() {
    let out = gaitdom(&["label", "--input", "/no/such/file.csv", "--output", "/tmp/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: io: /no/such/file.csv"), "{err}");
}

const RESPONSES: &str = "\
gait_id,participant_id,adjective,value,timestamp
a,p1,submissive,5,t
a,p1,withdrawn,5,t
a,p1,dominant,1,t
a,p1,confident,1,t
a,p2,submissive,5,t
a,p2,withdrawn,5,t
a,p2,dominant,1,t
a,p2,confident,1,t
b,p1,submissive,3,t
b,p1,withdrawn,3,t
b,p1,dominant,3,t
b,p1,confident,3,t
b,p2,submissive,3,t
b,p2,withdrawn,3,t
b,p2,dominant,3,t
b,p2,confident,3,t
c,p1,submissive,1,t
c,p1,withdrawn,1,t
c,p1,dominant,5,t
c,p1,confident,5,t
c,p2,submissive,1,t
c,p2,withdrawn,1,t
c,p2,dominant,5,t
c,p2,confident,5,t
d,p1,submissive,2,t
d,p1,withdrawn,1,t
d,p1,dominant,4,t
d,p1,confident,4,t
d,p2,submissive,2,t
d,p2,withdrawn,2,t
d,p2,dominant,4,t
d,p2,confident,5,t
";

#[test]
fn label_applies_the_published_scoring() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("responses.csv");
    let output = dir.path().join("labels.csv");
    std::fs::write(&input, RESPONSES).unwrap();
    ok(&["label", "--input", s(&input), "--output", s(&output), "--deterministic"]);
    // raw: a -4.08, b -0.12, c 3.84, d 2.415; normalized over [-4.08, 3.84]:
    // a -1 (HS), b 0 (N), c 1 (HD), d 0.6402 (D)
    let labels = read_labels_csv(std::fs::File::open(&output).unwrap()).unwrap();
    let got: Vec<(&str, DominanceLabel)> = labels.iter().map(|l| (l.gait_id.as_str(), l.label5)).collect();
    use DominanceLabel::*;
    assert_eq!(got, vec![("a", HS), ("b", N), ("c", HD), ("d", D)]);
    assert!((labels[3].raw - 2.415).abs() < 1e-12);
    let d = (2.415 - -4.08) / (3.84 - -4.08) * 2.0 - 1.0;
    assert!((labels[3].normalized - d).abs() < 1e-12);
    let meta = std::fs::read_to_string(dir.path().join("labels.csv.meta.json")).unwrap();
    assert!(meta.contains("\"seed\": 0") && !meta.contains("created_unix"), "{meta}");
}

struct Study {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

fn study(n: usize) -> Study {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let gaits = root.join("gaits");
    std::fs::create_dir_all(&gaits).unwrap();
    let corpus = synthetic_corpus(n, 5);
    for p in &corpus {
        save_gait(&p.gait, &gaits.join(format!("{}.json", p.gait.id))).unwrap();
    }
    let planted: Vec<(String, f64)> = corpus.iter().map(|p| (p.gait.id.clone(), p.dominance)).collect();
    let records = simulate_ratings(&planted, &RaterPanel { seed: 6, ..RaterPanel::default() });
    write_responses_csv(std::fs::File::create(root.join("responses.csv")).unwrap(), &records).unwrap();
    let r = |f: &str| root.join(f);
    ok(&["features", "--input", s(&gaits), "--output", s(&r("features.csv"))]);
    ok(&["label", "--input", s(&r("responses.csv")), "--output", s(&r("labels.csv")), "--mapping", s(&r("mapping.json"))]);
    Study { _dir: dir, root }
}

#[test]
fn crossval_is_reproducible() {
    let st = study(40);
    let r = |f: &str| st.root.join(f);
    let run = |out: &str| {
        ok(&[
            "crossval", "--features", s(&r("features.csv")), "--labels", s(&r("labels.csv")), "--k", "4",
            "--iterations", "3", "--seed", "7", "--deterministic", "--output", s(&r(out)),
        ]);
        (std::fs::read(r(out)).unwrap(), std::fs::read(r(&format!("{out}.meta.json"))).unwrap())
    };
    assert_eq!(run("cv1.json"), run("cv2.json"));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(r("cv1.json")).unwrap()).unwrap();
    assert_eq!(report["cv"]["per_iteration"].as_array().unwrap().len(), 3);
}

#[test]
fn train_then_classify() {
    let st = study(30);
    let r = |f: &str| st.root.join(f);
    ok(&["train", "--features", s(&r("features.csv")), "--labels", s(&r("labels.csv")), "--levels", "5", "--output", s(&r("model.json"))]);
    let out = ok(&["classify", "--input", s(&r("gaits")), "--model", s(&r("model.json")), "--mapping", s(&r("mapping.json"))]);
    let lines: Vec<serde_json::Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 30);
    assert!(lines.iter().all(|l| l["label5"].is_string() && l["normalized_score"].is_number()));
    let meta = std::fs::read_to_string(r("model.json.meta.json")).unwrap();
    assert!(meta.contains("\"seed\": 0"));
}

#[test]
fn simulate_writes_a_trace() {
    let st = study(20);
    let r = |f: &str| st.root.join(f);
    let labels = read_labels_csv(std::fs::File::open(r("labels.csv")).unwrap()).unwrap();
    let level = labels[0].label5;
    let scene = serde_json::json!({
        "seed": 3, "frames": 30,
        "characters": [
            {"level": level, "spawn": [0.0, 0.0, 0.0], "goal": [5.0, 0.0, 0.0], "speed": 1.2},
            {"level": level, "spawn": [0.0, 0.0, 2.0], "goal": [0.0, 0.0, -4.0], "speed": 1.0}
        ]
    });
    std::fs::write(r("scene.json"), scene.to_string()).unwrap();
    ok(&["simulate", "--input", s(&r("scene.json")), "--gaits", s(&r("gaits")), "--labels", s(&r("labels.csv")), "--output", s(&r("trace.csv"))]);
    let trace = std::fs::read_to_string(r("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 1 + 31 * 2);
    assert!(trace.starts_with("frame,time,character,gait_id,level,x,y,z,heading,cursor"));
}

#[test]
fn bench_writes_the_requested_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    ok(&["bench", "--synthetic", "10", "--rows", "1,2", "--output", s(&out)]);
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("1,1000,") && rows[2].starts_with("2,1000,"));
}

/// A 16-joint BVH with CMU joint names, zero rotations and the root moving
/// 1 cm per frame along +Z.
fn cmu_bvh(frames: usize) -> String {
    let names = [
        "Hips", "Spine", "Neck", "Head", "LeftArm", "LeftForeArm", "LeftHand", "RightArm", "RightForeArm", "RightHand",
        "LeftUpLeg", "LeftLeg", "LeftFoot", "RightUpLeg", "RightLeg", "RightFoot",
    ];
    let pose = reference_pose();
    fn block(out: &mut String, j: JointId, names: &[&str; 16], pose: &gaitdom::mocap::Pose, depth: usize) {
        let pad = "  ".repeat(depth);
        let here = pose.joint(j);
        let off = match j.parent() {
            Some(p) => here - pose.joint(p),
            None => here,
        };
        let kw = if j.parent().is_none() { "ROOT" } else { "JOINT" };
        out.push_str(&format!("{pad}{kw} {}\n{pad}{{\n{pad}  OFFSET {} {} {}\n", names[j.index()], off.x, off.y, off.z));
        if j.parent().is_none() {
            out.push_str(&format!("{pad}  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation\n"));
        } else {
            out.push_str(&format!("{pad}  CHANNELS 3 Zrotation Xrotation Yrotation\n"));
        }
        let children: Vec<JointId> = JointId::ALL.iter().copied().filter(|c| c.parent() == Some(j)).collect();
        if children.is_empty() {
            out.push_str(&format!("{pad}  End Site\n{pad}  {{\n{pad}    OFFSET 0 0.05 0\n{pad}  }}\n"));
        }
        for c in children {
            block(out, c, names, pose, depth + 1);
        }
        out.push_str(&format!("{pad}}}\n"));
    }
    let mut text = String::from("HIERARCHY\n");
    block(&mut text, JointId::Root, &names, &pose, 0);
    text.push_str(&format!("MOTION\nFrames: {frames}\nFrame Time: 0.0083333333\n"));
    let channels = 6 + 3 * 15;
    for f in 0..frames {
        let mut row = vec!["0".to_string(); channels];
        row[2] = format!("{}", 0.01 * f as f64);
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    text
}

#[test]
fn convert_retargets_cmu_names() {
    let dir = tempfile::tempdir().unwrap();
    let bvh = dir.path().join("walk01.bvh");
    std::fs::write(&bvh, cmu_bvh(12)).unwrap();
    let out = dir.path().join("gaits");
    ok(&["convert", "--input", s(&bvh), "--output", s(&out)]);
    let g = gaitdom::mocap::load_gait(&out.join("walk01.json")).unwrap();
    assert_eq!(g.frame_count(), 12);
    assert!((g.fps - 120.0).abs() < 1e-6);
    let rest = reference_pose();
    for (f, pose) in g.frames.iter().enumerate() {
        for j in JointId::ALL {
            let want = rest.joint(j) + gaitdom::mocap::Vec3::new(0.0, 0.0, 0.01 * f as f64);
            assert!((pose.joint(j) - want).norm() < 1e-9, "frame {f} {j:?}");
        }
    }
    assert!(dir.path().join("gaits.meta.json").exists());
}
