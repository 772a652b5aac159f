use std::sync::Arc;

use serde_json::{json, Value};
use tau2::algebra::Algebra;
use tau2::arknit::{ar_quiver_dot, brute_force_indecomposables, knit_indecomposables, IndecIndex, KnitLimits};
use tau2::highercat::{find_cluster_tilting, is_d_cluster_tilting, Subcat};
use tau2::modcat::{decompose, global_dimension, is_isomorphic, module_from_json, module_to_json};
use tau2::tautilt::{enumerate_support_tau2_with_budget, verify_theorem1_with_budget};
use tau2::torsion::enumerate_with_budget;
use tau2::Error;

use crate::gens::{name_of, subcat};
use crate::{pretty, Cli, Command, Enum, Failure, ModuleCmd, Outcome, Verify};

const GLDIM_CAP: usize = 16;
const ORACLE_BUDGET: u64 = 1 << 22;

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let (code, error) = match &e {
            Error::Syntax { .. }
            | Error::UnknownLabel(_)
            | Error::DuplicateLabel(_)
            | Error::ShortRelationPath(_)
            | Error::NonParallelRelation(_)
            | Error::NotComposable(_)
            | Error::UnknownVertex(_)
            | Error::InvalidField(_)
            | Error::InvalidModule(_)
            | Error::Json(_)
            | Error::DimensionMismatch(_)
            | Error::AlgebraMismatch => (4, "INVALID_INPUT"),
            Error::NotAdmissible { .. } => (4, "NOT_ADMISSIBLE"),
            Error::LimitExceeded { .. } => (3, "LIMIT_EXCEEDED"),
            Error::BudgetExceeded(_) | Error::TooLarge { .. } => (3, "TOO_LARGE"),
            Error::IncompleteHost => (3, "INCOMPLETE_HOST"),
            Error::Unsupported(_) => (4, "UNSUPPORTED"),
            Error::FailedResolution(_) | Error::NotTwoExact(_) => (2, "FALSIFIED"),
        };
        Failure {
            code,
            error,
            detail: e.to_string(),
        }
    }
}

fn load(cli: &Cli) -> Result<Arc<Algebra>, Failure> {
    let text = std::fs::read_to_string(&cli.spec).map_err(|e| Failure {
        code: 4,
        error: "USAGE",
        detail: format!("{}: {e}", cli.spec.display()),
    })?;
    let alg = Algebra::from_text(&text)?;
    Ok(match cli.config.field {
        Some(p) => alg.with_field(p)?,
        None => alg,
    })
}

fn knit(cli: &Cli, alg: &Arc<Algebra>) -> Result<Arc<IndecIndex>, Failure> {
    let limits = KnitLimits {
        max_count: cli.config.max_indec,
        max_dim: cli.config.max_dim,
    };
    Ok(Arc::new(knit_indecomposables(alg, limits)?))
}

fn named(host: &IndecIndex, c: &Subcat) -> Value {
    json!(c.members.iter().map(|&i| name_of(host, i)).collect::<Vec<_>>())
}

fn done(v: Value) -> Result<Outcome, Failure> {
    Ok(Outcome {
        body: pretty(&v),
        falsified: false,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let alg = load(cli)?;
    let budget = cli.config.budget;
    match &cli.command {
        Command::Info { echo_spec } => {
            let mut v = json!({
                "field": alg.field().p(),
                "dim": alg.dim(),
                "vertices": alg.num_vertices(),
                "arrows": alg.num_arrows(),
                "gldim": global_dimension(&alg, GLDIM_CAP),
            });
            if *echo_spec {
                v["spec"] = json!(alg.spec().to_text());
            }
            done(v)
        }
        Command::Indecs { oracle, bound } => {
            let host = knit(cli, &alg)?;
            let mut v = host.to_json();
            let mut falsified = false;
            if *oracle {
                let bounds = vec![*bound; alg.num_vertices()];
                let brute = brute_force_indecomposables(&alg, &bounds, ORACLE_BUDGET)?;
                let within: Vec<usize> = (0..host.len())
                    .filter(|&i| host.modules[i].dims().iter().all(|&d| d <= *bound))
                    .collect();
                let agrees = brute.len() == within.len()
                    && brute.iter().all(|m| within.iter().any(|&i| is_isomorphic(m, &host.modules[i])));
                falsified = !agrees;
                v["oracle"] = json!({"bound": bound, "count": brute.len(), "knitted_within_bound": within.len(), "agrees": agrees});
            }
            Ok(Outcome {
                body: pretty(&v),
                falsified,
            })
        }
        Command::Ar { dot } => {
            let host = knit(cli, &alg)?;
            if *dot {
                Ok(Outcome {
                    body: ar_quiver_dot(&host),
                    falsified: false,
                })
            } else {
                done(host.to_json())
            }
        }
        Command::Ctfind { d } => {
            let host = knit(cli, &alg)?;
            let found = find_cluster_tilting(&host, *d, budget)?;
            let list: Vec<Value> = found.iter().map(|c| named(&host, c)).collect();
            done(json!({"d": d, "subcategories": list}))
        }
        Command::Ctcheck { gens, d } => {
            let host = knit(cli, &alg)?;
            let c = subcat(&host, gens)?;
            let rep = is_d_cluster_tilting(&c, *d)?;
            done(json!({"d": d, "members": named(&host, &c), "holds": rep.holds, "violations": rep.violations}))
        }
        Command::Torsion { action: Enum::Enum { ct } } => {
            let host = knit(cli, &alg)?;
            let c = subcat(&host, ct)?;
            let pairs = enumerate_with_budget(&c, budget)?;
            let list: Vec<Value> = pairs
                .iter()
                .map(|p| {
                    let mut v = p.to_json();
                    v["t_names"] = named(&host, &p.t);
                    v["f_names"] = named(&host, &p.f);
                    v
                })
                .collect();
            done(json!({"pairs": list}))
        }
        Command::Tau2 { action: Enum::Enum { ct } } => {
            let host = knit(cli, &alg)?;
            let c = subcat(&host, ct)?;
            let (tau2, disagreements) = enumerate_support_tau2_with_budget(&c, budget)?;
            done(json!({"tau2": tau2, "idempotent_disagreements": disagreements}))
        }
        Command::Verify { what: Verify::Theorem1 { ct } } => {
            let host = knit(cli, &alg)?;
            let c = subcat(&host, ct)?;
            let rep = verify_theorem1_with_budget(&c, budget)?;
            Ok(Outcome {
                body: pretty(&rep.to_json()),
                falsified: !rep.holds,
            })
        }
        Command::Module { action: ModuleCmd::Decompose { file } } => {
            let text = std::fs::read_to_string(file).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            let m = module_from_json(&alg, &text)?;
            let cert = decompose(&m);
            let summands: Vec<Value> = cert
                .summands
                .iter()
                .map(|(s, k)| json!({"dims": s.dims(), "multiplicity": k, "module": module_to_json(s)}))
                .collect();
            done(json!({"dims": m.dims(), "summands": summands}))
        }
    }
}
