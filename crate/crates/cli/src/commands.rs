use std::fs;

use anyhow::{Context as _, Result};
use matcount::counting::{counting_bound_check, linear_forms_of};
use matcount::extremal::{
    bose_burton_witness, doubling_check, erdos_stone_scan, exhaustive_extremal, extbb_greedy,
    removal_check, threshold_demo_n21_with, CoordinateSubgroup, DyadicGroup, ExtremalMode,
};
use matcount::factor::{
    consistency_group, consistency_group_literal, equidistribution_scan, parse_factor,
    uniformity_report, EquidistributionReport, UniformityReport,
};
use matcount::gowers::gowers_norm;
use matcount::matroid::{
    contains_copy, count_copies, critical_number, random_matroid, sample_injections, write_matroid,
    MapQuery, SampledCount,
};
use matcount::polynomial::parse_poly;
use matcount::regularity::{
    decompose_linear, parse_table, read_bundle, reduced_matroid, verify_partition, write_bundle,
    EtaSchedule, ReducedMatroid,
};
use matcount::{Budget, CTable, GowersStrategy, Matroid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Command, CountMode, ExtremalModeArg, StrategyArg};
use crate::io::{load_matroid, missing, param, read_path, ExperimentConfig, Output};

const TRIANGLE: &str = "pg:2";

pub struct Context {
    pub budget: Budget,
    pub seed: Option<u64>,
    pub config: ExperimentConfig,
    pub out: Output,
}

impl Context {
    fn seed(&self) -> Result<u64> {
        self.seed
            .or(self.config.seed)
            .ok_or_else(|| param("randomized modes need --seed or a config seed"))
    }

    /// `--in` if given, otherwise a seeded random matroid.
    fn host_or_random(
        &self,
        input: Option<&str>,
        n: Option<usize>,
        density: Option<f64>,
    ) -> Result<Matroid> {
        if input.is_some() {
            return load_matroid(input, "--in");
        }
        let n = n.or(self.config.n).ok_or_else(|| missing("--in or --n"))?;
        let density = density
            .or(self.config.density)
            .ok_or_else(|| missing("--density"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed()?);
        Ok(random_matroid(n, density, &mut rng)?)
    }
}

fn bits(x: u64, width: usize) -> String {
    format!("{x:0width$b}")
}

#[derive(Serialize)]
struct Info {
    rank: usize,
    size: usize,
    density: f64,
    critical: usize,
}

#[derive(Serialize)]
struct Critical {
    rank: usize,
    critical: usize,
}

#[derive(Serialize)]
struct Containment {
    contains: bool,
    images: Option<Vec<String>>,
}

#[derive(Serialize)]
struct Sampled {
    #[serde(flatten)]
    sample: SampledCount,
    aut: u128,
    copies_estimate: f64,
}

#[derive(Serialize)]
struct Norm {
    n: usize,
    d: usize,
    strategy: GowersStrategy,
    norm: f64,
}

#[derive(Serialize)]
struct Decomposed {
    complexity: usize,
    forms_added: usize,
    eta: f64,
    bundle: String,
}

#[derive(Serialize)]
struct Reduced<'a> {
    #[serde(flatten)]
    reduced: &'a ReducedMatroid,
    size: usize,
    includes_zero_atom: bool,
}

#[derive(Serialize)]
struct Uniformity {
    #[serde(flatten)]
    report: UniformityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    equidistribution: Option<EquidistributionReport>,
}

pub fn run(cmd: &Command, ctx: &Context) -> Result<()> {
    let budget = &ctx.budget;
    let out = &ctx.out;
    match cmd {
        Command::MatroidInfo { host, emit } => {
            let m = load_matroid(host.input.as_deref(), "--in")?;
            if *emit {
                return out.text(&write_matroid(&m));
            }
            out.json(&Info {
                rank: m.rank(),
                size: m.len(),
                density: m.density(),
                critical: critical_number(&m),
            })
        }
        Command::Critical { host } => {
            let m = load_matroid(host.input.as_deref(), "--in")?;
            out.json(&Critical {
                rank: m.rank(),
                critical: critical_number(&m),
            })
        }
        Command::Contains { host, target } => {
            let m = load_matroid(host.input.as_deref(), "--in")?;
            let n = load_matroid(target.sub.as_deref(), "--sub")?;
            let inj = contains_copy(&m, &n);
            out.json(&Containment {
                contains: inj.is_some(),
                images: inj.map(|i| i.images().iter().map(|&x| bits(x, m.rank())).collect()),
            })
        }
        Command::Count {
            host,
            target,
            mode,
            samples,
            bundle,
            epsilon,
            zeta,
        } => {
            let m = load_matroid(host.input.as_deref(), "--in")?;
            let n = load_matroid(target.sub.as_deref(), "--sub")?;
            match mode {
                CountMode::Exact => out.json(&count_copies(&m, &n, budget)?),
                CountMode::Sampled => {
                    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed()?);
                    let aut = matcount::matroid::automorphism_count(&n, budget)?;
                    let sample = sample_injections(
                        &MapQuery::injective(m.elements(), &n),
                        *samples,
                        &mut rng,
                    );
                    out.json(&Sampled {
                        copies_estimate: sample.estimate / aut as f64,
                        sample,
                        aut,
                    })
                }
                CountMode::Bound => {
                    let dir = bundle.as_ref().ok_or_else(|| missing("--bundle"))?;
                    let dec =
                        read_bundle(dir).with_context(|| format!("bundle {}", dir.display()))?;
                    let epsilon = epsilon.ok_or_else(|| missing("--epsilon"))?;
                    out.json(&counting_bound_check(&m, &dec, &n, epsilon, *zeta, budget)?)
                }
            }
        }
        Command::Gowers {
            host,
            table,
            poly,
            d,
            strategy,
        } => {
            let f: CTable<f64> = match (host.input.as_deref(), table, poly) {
                (Some(_), None, None) => {
                    CTable::from_real(&load_matroid(host.input.as_deref(), "--in")?.indicator())
                }
                (None, Some(t), None) => CTable::from_real(&parse_table(&read_path(t)?)?),
                (None, None, Some(p)) => CTable::exp_of(&parse_poly(&read_path(p)?)?),
                _ => return Err(param("give exactly one of --in, --table, --poly")),
            };
            let strategy = match strategy {
                Some(StrategyArg::Direct) => GowersStrategy::Direct,
                Some(StrategyArg::Recursive) => GowersStrategy::Recursive,
                Some(StrategyArg::Wht) => GowersStrategy::WhtBase,
                None => GowersStrategy::fastest_for(*d),
            };
            let norm = gowers_norm(&f, *d, strategy, budget)?;
            out.json(&Norm {
                n: f.dim(),
                d: *d,
                strategy,
                norm,
            })
        }
        Command::Decompose {
            host,
            bundle,
            eta_prime,
        } => {
            let m = load_matroid(host.input.as_deref(), "--in")?;
            let dir = bundle.as_ref().ok_or_else(|| missing("--bundle"))?;
            let (dec, forms_added) = decompose_linear(&m.indicator(), *eta_prime)?;
            write_bundle(dir, &dec)?;
            out.json(&Decomposed {
                complexity: dec.factor.complexity(),
                forms_added,
                eta: dec.params.eta,
                bundle: dir.display().to_string(),
            })
        }
        Command::Verify {
            host,
            bundle,
            delta,
            eta,
            d,
            epsilon,
        } => {
            let m = load_matroid(host.input.as_deref(), "--in")?;
            let dir = bundle.as_ref().ok_or_else(|| missing("--bundle"))?;
            let dec = read_bundle(dir)?;
            let eta = match eta {
                Some(s) => s.parse()?,
                None => EtaSchedule::Constant(dec.params.eta),
            };
            let delta = delta.unwrap_or(dec.params.delta);
            let d = d.unwrap_or(dec.params.d);
            out.json(&verify_partition(
                &m.indicator(),
                &dec,
                delta,
                &eta,
                d,
                *epsilon,
                budget,
            )?)
        }
        Command::Reduced {
            host,
            bundle,
            epsilon,
            zeta,
        } => {
            let m = load_matroid(host.input.as_deref(), "--in")?;
            let dir = bundle.as_ref().ok_or_else(|| missing("--bundle"))?;
            let dec = read_bundle(dir)?;
            let epsilon = epsilon.ok_or_else(|| missing("--epsilon"))?;
            let zeta = zeta.ok_or_else(|| missing("--zeta"))?;
            let r = reduced_matroid(m.elements(), &dec, epsilon, zeta)?;
            out.json(&Reduced {
                size: r.points().len(),
                includes_zero_atom: r.includes_zero_atom(),
                reduced: &r,
            })
        }
        Command::Uniformity {
            factor,
            target,
            epsilon,
        } => {
            let path = factor.as_ref().ok_or_else(|| missing("--factor"))?;
            let b = parse_factor(&read_path(path)?)
                .with_context(|| format!("in {}", path.display()))?;
            let report = uniformity_report(&b, budget)?;
            let equidistribution = match target.sub.as_deref() {
                Some(_) => {
                    let n = load_matroid(target.sub.as_deref(), "--sub")?;
                    let epsilon = epsilon.ok_or_else(|| missing("--epsilon"))?;
                    Some(equidistribution_scan(
                        &b,
                        &linear_forms_of(&n),
                        epsilon,
                        budget,
                    )?)
                }
                None => None,
            };
            out.json(&Uniformity {
                report,
                equidistribution,
            })
        }
        Command::Phi {
            target,
            d,
            k,
            n0,
            literal,
            doubled,
        } => {
            let n = load_matroid(target.sub.as_deref(), "--sub")?;
            let mut l = linear_forms_of(&n);
            if *doubled {
                l = l.glue_double()?;
            }
            let n0 = n0.unwrap_or(l.vars() + d);
            let g = if *literal {
                consistency_group_literal(&l, *d, *k, n0, budget)?
            } else {
                consistency_group(&l, *d, *k, n0, budget)?
            };
            out.json(&g)
        }
        Command::Extbb {
            group,
            subgroup,
            sets,
        } => {
            let g = DyadicGroup::new(group.clone())?;
            let h = if subgroup.is_empty() {
                CoordinateSubgroup::trivial(&g)
            } else {
                CoordinateSubgroup::new(&g, subgroup.clone())?
            };
            let path = sets.as_ref().ok_or_else(|| missing("--sets"))?;
            let sets: Vec<Vec<Vec<u64>>> = serde_json::from_str(&read_path(path)?)
                .map_err(|e| param(format!("sets file {}: {e}", path.display())))?;
            out.json(&extbb_greedy(&g, &h, &sets)?)
        }
        Command::BoseBurton { host, c } => {
            let m = load_matroid(host.input.as_deref(), "--in")?;
            let c = c.ok_or_else(|| missing("--c"))?;
            out.json(&bose_burton_witness(&m, c)?)
        }
        Command::Extremal {
            target,
            n,
            mode,
            trials,
            witness,
        } => {
            let t = load_matroid(target.sub.as_deref(), "--sub")?;
            let n = n.or(ctx.config.n).ok_or_else(|| missing("--n"))?;
            let mode = match mode {
                ExtremalModeArg::Exact => ExtremalMode::Exact,
                ExtremalModeArg::Random => ExtremalMode::Random {
                    trials: *trials,
                    seed: ctx.seed()?,
                },
            };
            let res = exhaustive_extremal(n, &t, mode, budget)?;
            if let (Some(path), Some(w)) = (witness, &res.witness) {
                fs::write(path, write_matroid(w))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            out.json(&res)
        }
        Command::RemovalCheck {
            host,
            target,
            n,
            density,
            zeta,
            eta_prime,
        } => {
            let m = ctx.host_or_random(host.input.as_deref(), *n, *density)?;
            let t = load_matroid(Some(target.sub.as_deref().unwrap_or(TRIANGLE)), "--sub")?;
            out.json(&removal_check(&m, &t, *zeta, *eta_prime, budget)?)
        }
        Command::DoublingCheck { host, target } => {
            let m = load_matroid(host.input.as_deref(), "--in")?;
            let t = load_matroid(Some(target.sub.as_deref().unwrap_or(TRIANGLE)), "--sub")?;
            out.json(&doubling_check(&m, &t, budget)?)
        }
        Command::ErdosStoneScan {
            target,
            n,
            densities,
            trials,
        } => {
            let t = load_matroid(Some(target.sub.as_deref().unwrap_or(TRIANGLE)), "--sub")?;
            let n = n.or(ctx.config.n).ok_or_else(|| missing("--n"))?;
            out.rows(&erdos_stone_scan(
                n,
                &t,
                densities,
                *trials,
                ctx.seed()?,
                budget,
            )?)
        }
        Command::ThresholdDemo {
            host,
            n,
            density,
            delta,
            ell,
            eta_prime,
        } => {
            let m = ctx.host_or_random(host.input.as_deref(), *n, *density)?;
            let delta = delta
                .or(ctx.config.delta)
                .ok_or_else(|| missing("--delta"))?;
            let ell = ell.or(ctx.config.ell).unwrap_or(3);
            let eta_prime = eta_prime.unwrap_or(delta / 4.0);
            out.json(&threshold_demo_n21_with(&m, delta, ell, eta_prime, budget)?)
        }
    }
}
