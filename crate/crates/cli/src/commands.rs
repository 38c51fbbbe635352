//! Subcommand implementations. Each returns the text to print on success;
//! failures carry their exit code through [`CmdError`].

use std::fs;

use rmwb_core::algebra::{validate, with_bounds, FiniteAlgebra, Profile};
use rmwb_core::builtins::builtin;
use rmwb_core::esakia::{
    counit_iso, dual_space, find_space_isomorphism, unit_iso, validate_space, Flavor, SpaceMap,
};
use rmwb_core::hom::{find_isomorphism, Morphism};
use rmwb_core::natural::{hom_dual, plus_algebra};
use rmwb_core::relevant::{
    find_relevant_isomorphism, project_space, reflect_space, reflection_counit, relevant_algebra,
    urquhart_dual, validate_relevant, RelevantMap,
};
use rmwb_core::subset::MAX_CARRIER;
use rmwb_core::twist::{twist_down, twist_up};

use crate::format::{emit_structure, parse_structure, Structure};
use crate::render::render;
use crate::{CmdError, CmdResult};

#[derive(Debug, Default)]
pub struct Options {
    pub functor: Option<String>,
    pub out: Option<String>,
    pub bounded: bool,
    pub generalized: bool,
}

pub fn run(command: &str, positional: &[String], opts: &Options) -> CmdResult<String> {
    match command {
        "validate" => cmd_validate(one_path(positional)?, opts),
        "builtin" => cmd_builtin(one_path(positional)?, opts),
        "functor" => cmd_functor(one_path(positional)?, opts),
        "roundtrip" => cmd_roundtrip(one_path(positional)?, opts),
        "iso" => cmd_iso(positional, opts),
        "render" => cmd_render(one_path(positional)?, opts),
        other => Err(CmdError::Parse(format!(
            "unknown command '{other}' (expected validate|builtin|functor|roundtrip|iso|render)"
        ))),
    }
}

fn one_path(positional: &[String]) -> CmdResult<&str> {
    match positional {
        [p] => Ok(p),
        _ => Err(CmdError::Parse("expected exactly one argument".into())),
    }
}

fn carrier_limit() -> usize {
    std::env::var("RMWB_MAX_CARRIER")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .map(|v| v.min(MAX_CARRIER))
        .unwrap_or(MAX_CARRIER)
}

fn load(path: &str, opts: &Options) -> CmdResult<Structure> {
    let text = fs::read_to_string(path).map_err(|e| CmdError::Parse(format!("{path}: {e}")))?;
    let mut s = parse_structure(&text)?;
    let limit = carrier_limit();
    if s.carrier_size() > limit {
        return Err(CmdError::Semantic(
            rmwb_core::Error::CarrierTooLarge {
                size: s.carrier_size(),
                max: limit,
            }
            .to_string(),
        ));
    }
    if opts.bounded {
        if let Structure::Algebra(a) = &s {
            s = Structure::Algebra(with_bounds(a)?);
        }
    }
    Ok(s)
}

fn write_out(opts: &Options, content: &str) -> CmdResult<String> {
    let out = opts
        .out
        .as_deref()
        .ok_or_else(|| CmdError::Parse("missing --out <path>".into()))?;
    fs::write(out, content)?;
    Ok(format!("wrote {out}\n"))
}

fn cmd_validate(path: &str, opts: &Options) -> CmdResult<String> {
    let s = load(path, opts)?;
    let report = match &s {
        Structure::Algebra(a) => validate(a),
        Structure::Space(x) => validate_space(x),
        Structure::Relevant(r) => validate_relevant(r),
    };
    let text = report.to_string();
    if report.ok() {
        Ok(text)
    } else {
        Err(CmdError::Semantic(text))
    }
}

fn cmd_builtin(name: &str, opts: &Options) -> CmdResult<String> {
    let mut a = builtin(name)?;
    if opts.bounded && !matches!(a.profile, Profile::SugiharaBounded) {
        a = with_bounds(&a)?;
    }
    write_out(opts, &emit_structure(&Structure::Algebra(a)))
}

fn expect_algebra(s: Structure, what: &str) -> CmdResult<FiniteAlgebra> {
    match s {
        Structure::Algebra(a) => Ok(a),
        other => Err(CmdError::Semantic(format!(
            "{what} expects an algebra file, found a {} file",
            kind_name(&other)
        ))),
    }
}

fn kind_name(s: &Structure) -> &'static str {
    match s {
        Structure::Algebra(_) => "algebra",
        Structure::Space(_) => "space",
        Structure::Relevant(_) => "relevant-space",
    }
}

fn cmd_functor(path: &str, opts: &Options) -> CmdResult<String> {
    let which = opts
        .functor
        .as_deref()
        .ok_or_else(|| CmdError::Parse("missing --functor <name>".into()))?;
    let input = load(path, opts)?;
    let output = match which {
        "neg-cone" => {
            let a = expect_algebra(input, "neg-cone")?;
            Structure::Algebra(rmwb_core::algebra::negative_cone(&a)?)
        }
        "twist-down" => {
            let a = expect_algebra(input, "twist-down")?;
            Structure::Algebra(twist_down(&a)?)
        }
        "twist-up" => {
            let a = expect_algebra(input, "twist-up")?;
            Structure::Algebra(twist_up(&a)?)
        }
        "esakia" => {
            let a = expect_algebra(input, "esakia")?;
            if opts.generalized && a.profile == Profile::Bga {
                return Err(CmdError::Semantic(
                    "--generalized contradicts a bounded profile: the dual of a bga uses proper prime filters".into(),
                ));
            }
            Structure::Space(dual_space(&a)?)
        }
        "dw" => {
            let a = expect_algebra(input, "dw")?;
            Structure::Space(hom_dual(&a)?.space)
        }
        "urquhart" => {
            let a = expect_algebra(input, "urquhart")?;
            Structure::Relevant(urquhart_dual(&a)?)
        }
        "reflect" => match input {
            Structure::Space(x) => Structure::Relevant(reflect_space(&x)?),
            other => {
                return Err(CmdError::Semantic(format!(
                    "reflect expects a space file, found a {} file",
                    kind_name(&other)
                )))
            }
        },
        "project" => match input {
            Structure::Relevant(r) => Structure::Space(project_space(&r)?),
            other => {
                return Err(CmdError::Semantic(format!(
                    "project expects a relevant-space file, found a {} file",
                    kind_name(&other)
                )))
            }
        },
        other => {
            return Err(CmdError::Parse(format!(
                "unknown functor '{other}' (expected neg-cone|twist-up|twist-down|esakia|dw|urquhart|reflect|project)"
            )))
        }
    };
    write_out(opts, &emit_structure(&output))
}

fn morphism_witness(m: &Morphism) -> String {
    (0..m.source.n())
        .map(|i| format!("{}->{}", m.source.name_of(i), m.target.name_of(m.map[i])))
        .collect::<Vec<_>>()
        .join(" ")
}

fn space_witness(m: &SpaceMap) -> String {
    (0..m.source.n())
        .map(|i| {
            format!(
                "{}->{}",
                m.source.poset.name(i),
                m.target.poset.name(m.map[i])
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn relevant_witness(m: &RelevantMap) -> String {
    (0..m.source.n())
        .map(|i| {
            format!(
                "{}->{}",
                m.source.poset.name(i),
                m.target.poset.name(m.map[i])
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_roundtrip(path: &str, opts: &Options) -> CmdResult<String> {
    let s = load(path, opts)?;
    let mut lines: Vec<String> = Vec::new();
    let mut all_ok = true;
    let mut push = |label: &str, witness: Option<String>, ok: &mut bool| match witness {
        Some(w) => lines.push(format!("PASS {label}: {w}")),
        None => {
            lines.push(format!("FAIL {label}"));
            *ok = false;
        }
    };
    match s {
        Structure::Algebra(a) if a.profile.is_sugihara() => {
            let back = twist_up(&twist_down(&a)?)?;
            push(
                "twist round trip",
                find_isomorphism(&a, &back)?.as_ref().map(morphism_witness),
                &mut all_ok,
            );
            let plus = plus_algebra(&hom_dual(&a)?.space)?;
            push(
                "hom-dual round trip",
                find_isomorphism(&a, &plus.algebra)?
                    .as_ref()
                    .map(morphism_witness),
                &mut all_ok,
            );
            if a.profile == Profile::SugiharaBounded {
                let back = relevant_algebra(&urquhart_dual(&a)?)?;
                push(
                    "relevant round trip",
                    find_isomorphism(&a, &back)?.as_ref().map(morphism_witness),
                    &mut all_ok,
                );
            }
        }
        Structure::Algebra(b) if matches!(b.profile, Profile::Brsa | Profile::Bga) => {
            let back = twist_down(&twist_up(&b)?)?;
            push(
                "twist round trip",
                find_isomorphism(&b, &back)?.as_ref().map(morphism_witness),
                &mut all_ok,
            );
            let sigma = unit_iso(&b)?;
            push(
                "filter-dual round trip",
                Some(morphism_witness(&sigma)),
                &mut all_ok,
            );
        }
        Structure::Algebra(a) => {
            return Err(CmdError::Semantic(format!(
                "no round trip applies to profile {}",
                a.profile.as_str()
            )))
        }
        Structure::Space(x) if matches!(x.flavor, Flavor::Brs | Flavor::Bg) => {
            let phi = counit_iso(&x)?;
            push(
                "filter-dual round trip",
                Some(space_witness(&phi)),
                &mut all_ok,
            );
        }
        Structure::Space(x) if x.flavor.sugihara() => {
            let plus = plus_algebra(&x)?;
            let back = hom_dual(&plus.algebra)?.space;
            push(
                "hom-dual round trip",
                find_space_isomorphism(&x, &back)?
                    .as_ref()
                    .map(space_witness),
                &mut all_ok,
            );
            if x.flavor == Flavor::SugiharaUnpointed {
                let projected = project_space(&reflect_space(&x)?)?;
                let identical =
                    projected.poset == x.poset && projected.d == x.d && projected.top == x.top;
                push(
                    "reflection round trip",
                    identical.then(|| "identity".to_string()),
                    &mut all_ok,
                );
            }
        }
        Structure::Space(x) => {
            return Err(CmdError::Semantic(format!(
                "no round trip applies to flavor {}",
                x.flavor.as_str()
            )))
        }
        Structure::Relevant(r) => {
            let theta = reflection_counit(&r)?;
            push(
                "reflection round trip",
                Some(relevant_witness(&theta)),
                &mut all_ok,
            );
        }
    }
    let text = lines.join("\n") + "\n";
    if all_ok {
        Ok(text)
    } else {
        Err(CmdError::Semantic(text))
    }
}

fn cmd_iso(positional: &[String], opts: &Options) -> CmdResult<String> {
    let [p1, p2] = positional else {
        return Err(CmdError::Parse("expected exactly two arguments".into()));
    };
    let s1 = load(p1, opts)?;
    let s2 = load(p2, opts)?;
    let witness = match (&s1, &s2) {
        (Structure::Algebra(a), Structure::Algebra(b)) => {
            find_isomorphism(a, b)?.as_ref().map(morphism_witness)
        }
        (Structure::Space(x), Structure::Space(y)) => {
            find_space_isomorphism(x, y)?.as_ref().map(space_witness)
        }
        (Structure::Relevant(x), Structure::Relevant(y)) => find_relevant_isomorphism(x, y)?
            .as_ref()
            .map(relevant_witness),
        _ => {
            return Err(CmdError::Semantic(format!(
                "cannot compare a {} file with a {} file",
                kind_name(&s1),
                kind_name(&s2)
            )))
        }
    };
    match witness {
        Some(w) => Ok(format!("isomorphic: {w}\n")),
        None => Err(CmdError::Semantic("not isomorphic".into())),
    }
}

fn cmd_render(path: &str, opts: &Options) -> CmdResult<String> {
    let s = load(path, opts)?;
    write_out(opts, &render(&s))
}
