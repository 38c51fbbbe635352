use std::fs;
use std::path::PathBuf;
use std::process::Command;

use rmwb::commands::{run, Options};
use rmwb::format::{emit_structure, parse_structure, Structure};
use rmwb::CmdError;
use rmwb_core::algebra::{negative_cone, with_bounds};
use rmwb_core::builtins::{builtin, BUILTIN_NAMES};
use rmwb_core::esakia::dual_space;
use rmwb_core::natural::hom_dual;
use rmwb_core::relevant::{project_space, reflect_space, urquhart_dual};
use rmwb_core::twist::{twist_down, twist_up};

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rmwb-cli-{}-{tag}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn path_str(p: &std::path::Path) -> String {
    p.to_str().unwrap().to_string()
}

fn opts_out(out: &std::path::Path) -> Options {
    Options {
        out: Some(path_str(out)),
        ..Default::default()
    }
}

#[test]
fn golden_render_of_the_cone_of_e() {
    let dir = workdir("golden");
    let alg = dir.join("E.alg");
    run("builtin", &["E".into()], &opts_out(&alg)).unwrap();
    let cone = dir.join("E_cone.alg");
    run(
        "functor",
        &[path_str(&alg)],
        &Options {
            functor: Some("neg-cone".into()),
            out: Some(path_str(&cone)),
            ..Default::default()
        },
    )
    .unwrap();
    let dot = dir.join("E_cone.dot");
    run("render", &[path_str(&cone)], &opts_out(&dot)).unwrap();
    let produced = fs::read_to_string(&dot).unwrap();
    assert_eq!(produced, include_str!("golden/e_negcone.dot"));
}

#[test]
fn emit_parse_is_the_identity_on_builtins_and_functor_outputs() {
    for name in BUILTIN_NAMES {
        let a = builtin(name).unwrap();
        let text = emit_structure(&Structure::Algebra(a.clone()));
        let Structure::Algebra(back) = parse_structure(&text).unwrap() else {
            panic!("algebra reparses as something else");
        };
        assert_eq!(a, back, "{name}");
        // emission is byte-stable across a parse
        assert_eq!(text, emit_structure(&Structure::Algebra(back)), "{name}");
    }

    // algebra-valued functor outputs
    let e = builtin("E").unwrap();
    let e_bot = builtin("E_bot").unwrap();
    let cone = builtin("E_neg").unwrap();
    for a in [
        negative_cone(&e).unwrap(),
        twist_down(&e).unwrap(),
        twist_down(&e_bot).unwrap(),
        twist_up(&cone).unwrap(),
    ] {
        let text = emit_structure(&Structure::Algebra(a.clone()));
        let Structure::Algebra(back) = parse_structure(&text).unwrap() else {
            panic!("algebra reparses as something else");
        };
        assert_eq!(a, back, "{}", a.name);
    }

    // space-valued outputs: the stored Q is derivable for these flavors and
    // is not serialised, so compare everything else plus the effective Q
    for x in [
        dual_space(&cone).unwrap(),
        hom_dual(&e).unwrap().space,
        hom_dual(&e_bot).unwrap().space,
        project_space(&urquhart_dual(&e_bot).unwrap()).unwrap(),
    ] {
        let text = emit_structure(&Structure::Space(x.clone()));
        let Structure::Space(back) = parse_structure(&text).unwrap() else {
            panic!("space reparses as something else");
        };
        assert_eq!(back.poset, x.poset);
        assert_eq!(back.d, x.d);
        assert_eq!(back.top, x.top);
        assert_eq!(back.flavor, x.flavor);
        assert_eq!(back.effective_q(), x.effective_q());
        assert_eq!(text, emit_structure(&Structure::Space(back)));
    }

    // relevant-space outputs round-trip exactly
    for r in [
        urquhart_dual(&e_bot).unwrap(),
        urquhart_dual(&with_bounds(&builtin("S5").unwrap()).unwrap()).unwrap(),
        reflect_space(&hom_dual(&e_bot).unwrap().space).unwrap(),
    ] {
        let text = emit_structure(&Structure::Relevant(r.clone()));
        let Structure::Relevant(back) = parse_structure(&text).unwrap() else {
            panic!("relevant space reparses as something else");
        };
        assert_eq!(r, back, "{}", r.name);
        assert_eq!(text, emit_structure(&Structure::Relevant(back)));
    }
}

#[test]
fn parse_errors_cite_line_numbers() {
    let bad = "algebra X profile sugihara\nelements a b\ncovers a<b\nunit c\n";
    match parse_structure(bad) {
        Err(CmdError::Parse(msg)) => assert!(msg.starts_with("line 4:"), "{msg}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let bad = "widget X profile sugihara\n";
    match parse_structure(bad) {
        Err(CmdError::Parse(msg)) => assert!(msg.starts_with("line 1:"), "{msg}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn validate_rejects_a_broken_multiplication() {
    let dir = workdir("badmult");
    let path = dir.join("S3bad.alg");
    fs::write(
        &path,
        "algebra S3bad profile sugihara\n\
         elements -1 0 1\n\
         covers -1<0 0<1\n\
         unit 0\n\
         neg 1 0 -1\n\
         mult -1: -1 -1 -1\n\
         mult 0: -1 0 1\n\
         mult 1: -1 1 0\n",
    )
    .unwrap();
    match run("validate", &[path_str(&path)], &Options::default()) {
        Err(CmdError::Semantic(report)) => {
            assert!(report.contains("FAIL"), "{report}");
            assert!(report.contains("residuation"), "{report}");
            assert!(report.contains("witness=("), "{report}");
        }
        other => panic!("expected a semantic failure, got {other:?}"),
    }
}

#[test]
fn validate_accepts_every_builtin() {
    let dir = workdir("validate-ok");
    for name in BUILTIN_NAMES {
        let path = dir.join(format!("{name}.alg"));
        run("builtin", &[name.to_string()], &opts_out(&path)).unwrap();
        let report = run("validate", &[path_str(&path)], &Options::default()).unwrap();
        assert!(report.contains("ok"), "{name}");
    }
}

#[test]
fn roundtrip_command_passes_on_derived_files() {
    let dir = workdir("roundtrip");
    let eb = dir.join("Eb.alg");
    run("builtin", &["E_bot".into()], &opts_out(&eb)).unwrap();
    let out = run("roundtrip", &[path_str(&eb)], &Options::default()).unwrap();
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");

    let urq = dir.join("Eb.urq");
    run(
        "functor",
        &[path_str(&eb)],
        &Options {
            functor: Some("urquhart".into()),
            out: Some(path_str(&urq)),
            ..Default::default()
        },
    )
    .unwrap();
    let out = run("roundtrip", &[path_str(&urq)], &Options::default()).unwrap();
    assert!(out.starts_with("PASS reflection round trip"), "{out}");

    let dw = dir.join("Eb.dw");
    run(
        "functor",
        &[path_str(&eb)],
        &Options {
            functor: Some("dw".into()),
            out: Some(path_str(&dw)),
            ..Default::default()
        },
    )
    .unwrap();
    let out = run("roundtrip", &[path_str(&dw)], &Options::default()).unwrap();
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");

    let down = dir.join("Eb_down.alg");
    run(
        "functor",
        &[path_str(&eb)],
        &Options {
            functor: Some("twist-down".into()),
            out: Some(path_str(&down)),
            ..Default::default()
        },
    )
    .unwrap();
    let esk = dir.join("Eb.esk");
    run(
        "functor",
        &[path_str(&down)],
        &Options {
            functor: Some("esakia".into()),
            out: Some(path_str(&esk)),
            ..Default::default()
        },
    )
    .unwrap();
    let out = run("roundtrip", &[path_str(&esk)], &Options::default()).unwrap();
    assert!(out.starts_with("PASS filter-dual round trip"), "{out}");
}

#[test]
fn identical_inputs_produce_identical_bytes() {
    let dir = workdir("determinism");
    let p1 = dir.join("a1.alg");
    let p2 = dir.join("a2.alg");
    run("builtin", &["E_bot".into()], &opts_out(&p1)).unwrap();
    run("builtin", &["E_bot".into()], &opts_out(&p2)).unwrap();
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
    let d1 = dir.join("a1.dot");
    let d2 = dir.join("a2.dot");
    run("render", &[path_str(&p1)], &opts_out(&d1)).unwrap();
    run("render", &[path_str(&p2)], &opts_out(&d2)).unwrap();
    assert_eq!(fs::read(&d1).unwrap(), fs::read(&d2).unwrap());
}

#[test]
fn iso_command_finds_and_refuses_witnesses() {
    let dir = workdir("iso");
    let e = dir.join("E.alg");
    run("builtin", &["E".into()], &opts_out(&e)).unwrap();
    let down = dir.join("E_down.alg");
    run(
        "functor",
        &[path_str(&e)],
        &Options {
            functor: Some("twist-down".into()),
            out: Some(path_str(&down)),
            ..Default::default()
        },
    )
    .unwrap();
    let cone = dir.join("E_neg.alg");
    run("builtin", &["E_neg".into()], &opts_out(&cone)).unwrap();
    let out = run(
        "iso",
        &[path_str(&down), path_str(&cone)],
        &Options::default(),
    )
    .unwrap();
    assert!(out.starts_with("isomorphic:"), "{out}");

    let s4 = dir.join("S4.alg");
    let s5 = dir.join("S5.alg");
    run("builtin", &["S4".into()], &opts_out(&s4)).unwrap();
    run("builtin", &["S5".into()], &opts_out(&s5)).unwrap();
    match run("iso", &[path_str(&s4), path_str(&s5)], &Options::default()) {
        Err(CmdError::Semantic(m)) => assert_eq!(m, "not isomorphic"),
        other => panic!("expected not-isomorphic, got {other:?}"),
    }
}

#[test]
fn bounded_flag_promotes_the_profile() {
    let dir = workdir("bounded");
    let s4 = dir.join("S4.alg");
    run("builtin", &["S4".into()], &opts_out(&s4)).unwrap();
    let urq = dir.join("S4.urq");
    // urquhart requires a bounded profile; the flag provides the promotion
    let unbounded = run(
        "functor",
        &[path_str(&s4)],
        &Options {
            functor: Some("urquhart".into()),
            out: Some(path_str(&urq)),
            ..Default::default()
        },
    );
    assert!(matches!(unbounded, Err(CmdError::Semantic(_))));
    run(
        "functor",
        &[path_str(&s4)],
        &Options {
            functor: Some("urquhart".into()),
            out: Some(path_str(&urq)),
            bounded: true,
            ..Default::default()
        },
    )
    .unwrap();
    let text = fs::read_to_string(&urq).unwrap();
    assert!(text.starts_with("space S4_bot_urq flavor relevant"));
}

#[test]
fn validate_accepts_space_files() {
    let dir = workdir("validate-spaces");
    let eb = dir.join("Eb.alg");
    run("builtin", &["E_bot".into()], &opts_out(&eb)).unwrap();
    for functor in ["dw", "urquhart"] {
        let out = dir.join(format!("Eb.{functor}"));
        run(
            "functor",
            &[path_str(&eb)],
            &Options {
                functor: Some(functor.into()),
                out: Some(path_str(&out)),
                ..Default::default()
            },
        )
        .unwrap();
        let report = run("validate", &[path_str(&out)], &Options::default()).unwrap();
        assert!(
            report
                .lines()
                .skip(1)
                .all(|l| l.trim_start().starts_with("ok")),
            "{report}"
        );
    }
}

#[test]
fn generalized_flag_is_an_explicitness_assertion() {
    let dir = workdir("generalized");
    let e = dir.join("E.alg");
    run("builtin", &["E".into()], &opts_out(&e)).unwrap();
    let down = dir.join("E_down.alg");
    run(
        "functor",
        &[path_str(&e)],
        &Options {
            functor: Some("twist-down".into()),
            out: Some(path_str(&down)),
            ..Default::default()
        },
    )
    .unwrap();
    // fine on the bottomless profile, where generalized filters are used
    let esk = dir.join("E.esk");
    run(
        "functor",
        &[path_str(&down)],
        &Options {
            functor: Some("esakia".into()),
            out: Some(path_str(&esk)),
            generalized: true,
            ..Default::default()
        },
    )
    .unwrap();
    // contradicts a bounded profile
    let bounded_down = dir.join("Eb_down.alg");
    run(
        "functor",
        &[path_str(&e)],
        &Options {
            functor: Some("twist-down".into()),
            out: Some(path_str(&bounded_down)),
            bounded: true,
            ..Default::default()
        },
    )
    .unwrap();
    let res = run(
        "functor",
        &[path_str(&bounded_down)],
        &Options {
            functor: Some("esakia".into()),
            out: Some(path_str(&esk)),
            generalized: true,
            ..Default::default()
        },
    );
    assert!(matches!(res, Err(CmdError::Semantic(_))));
}

#[test]
fn exit_codes_through_the_binary() {
    let dir = workdir("binary");
    let exe = env!("CARGO_BIN_EXE_rmwb");
    let e = dir.join("E.alg");

    let ok = Command::new(exe)
        .args(["builtin", "E", "--out", e.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));

    let semantic = Command::new(exe)
        .args(["iso", e.to_str().unwrap(), e.to_str().unwrap(), "--functor"])
        .output()
        .unwrap();
    assert_eq!(
        semantic.status.code(),
        Some(2),
        "dangling flag is a usage error"
    );

    let missing = Command::new(exe)
        .args(["validate", dir.join("nope.alg").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let bad = dir.join("bad.alg");
    fs::write(
        &bad,
        "algebra bad profile brsa\nelements a b t\ncovers a<t b<t\nunit t\nconst f t\n",
    )
    .unwrap();
    // a,b have no meet: not a lattice
    let notlattice = Command::new(exe)
        .args(["validate", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(notlattice.status.code(), Some(1));
    assert!(!notlattice.stderr.is_empty());
}

#[test]
fn carrier_cap_is_honoured() {
    let dir = workdir("cap");
    let s8 = dir.join("S8.alg");
    run("builtin", &["S8".into()], &opts_out(&s8)).unwrap();
    let exe = env!("CARGO_BIN_EXE_rmwb");
    let capped = Command::new(exe)
        .env("RMWB_MAX_CARRIER", "4")
        .args(["validate", s8.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(1));
    let text = String::from_utf8_lossy(&capped.stderr);
    assert!(text.contains("exceeds"), "{text}");
}
