//! Registry of named property suites. Each suite samples deterministic
//! random inputs per trial, measures residuals for a fixed list of
//! properties, and aggregates a `VerificationReport`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::Value;

use crate::algebra::AlgebraDescriptor;
use crate::duality;
use crate::error::{CoreError, Result};
use crate::grammar::parse_module_spec;
use crate::linalg::C64;
use crate::linking::LinkingAlgebra;
use crate::module::checks as mchecks;
use crate::module::{ModuleKind, ModuleSpace, Submodule};
use crate::operator::{
    compact_ideal, module_linear_endo_dimension, theta, theta_identities_check, AdjointableOp,
};
use crate::report::{FailureExemplar, PropertyStat, SuiteConfig, VerificationReport, MAX_EXEMPLARS};
use crate::rng::trial_rng;
use crate::tolerances::{rel, Tolerances};

/// A registered suite: name, one-line statement of what it checks, and how
/// to choose a module when the config leaves it empty.
pub struct SuiteDef {
    pub name: &'static str,
    pub summary: &'static str,
    default_module: fn(&str) -> String,
    runner: fn(&SuiteContext) -> Result<VerificationReport>,
}

fn rank2(algebra: &str) -> String {
    format!("free({algebra}, rank=2)")
}

fn rank1(algebra: &str) -> String {
    format!("free({algebra}, rank=1)")
}

fn tensor3(algebra: &str) -> String {
    format!("tensor(dim=3, {algebra})")
}

pub fn suite_defs() -> &'static [SuiteDef] {
    &[
        SuiteDef {
            name: "inner-product-axioms",
            summary: "the pairing is positive, linear in the second slot, action-compatible, and conjugate-symmetric",
            default_module: rank2,
            runner: run_inner_product_axioms,
        },
        SuiteDef {
            name: "cauchy-schwarz",
            summary: "<y,x><x,y> <= ||<x,x>|| <y,y> as operators, with the scalar corollary ||<x,y>|| <= ||x|| ||y||",
            default_module: rank2,
            runner: run_cauchy_schwarz,
        },
        SuiteDef {
            name: "norm-duality",
            summary: "||x|| = sup { ||<x,y>|| : ||y|| <= 1 }, attained at y = x/||x||",
            default_module: rank2,
            runner: run_norm_duality,
        },
        SuiteDef {
            name: "right-action-norm",
            summary: "||x a|| <= ||x|| ||a||, with equality at the unit",
            default_module: rank2,
            runner: run_right_action_norm,
        },
        SuiteDef {
            name: "tensor-positivity",
            summary: "Gram elements <u, u> of finite tensor sums are positive and vanish only on the zero element",
            default_module: tensor3,
            runner: run_tensor_positivity,
        },
        SuiteDef {
            name: "complement",
            summary: "generated submodules satisfy F (+) F-perp = X, F cap F-perp = 0 and F-perp-perp = F",
            default_module: rank2,
            runner: run_complement,
        },
        SuiteDef {
            name: "fullness",
            summary: "inner products of a module span a *-ideal; fullness matches the block support of the generator",
            default_module: rank1,
            runner: run_fullness,
        },
        SuiteDef {
            name: "adjoint-roundtrip",
            summary: "the adjoint is an involution and reverses products; <t x, y> = <x, t* y> on basis pairs",
            default_module: rank2,
            runner: run_adjoint_roundtrip,
        },
        SuiteDef {
            name: "theta-identities",
            summary: "theta_{x,y}* = theta_{y,x}, theta_{x,y} theta_{u,v} = theta_{x<y,u>,v}, t theta_{x,y} = theta_{tx,y}",
            default_module: rank2,
            runner: run_theta_identities,
        },
        SuiteDef {
            name: "compact-ideal",
            summary: "the span of the rank-one operators is a bi-ideal and exhausts the module-linear maps",
            default_module: rank2,
            runner: run_compact_ideal,
        },
        SuiteDef {
            name: "k-of-a-iso",
            summary: "on X = A the map theta_{a,b} -> a b* is a *-isomorphism and every t equals theta_{t(1),1}",
            default_module: rank1,
            runner: run_k_of_a,
        },
        SuiteDef {
            name: "cstar-identity",
            summary: "||t||^2 = ||t* t|| for adjointable operators, with the norm attained on unit probes",
            default_module: rank2,
            runner: run_cstar_identity,
        },
        SuiteDef {
            name: "hat-isometry",
            summary: "x -> <x, .> is an isometric module-linear embedding into the dual",
            default_module: rank2,
            runner: run_hat_isometry,
        },
        SuiteDef {
            name: "riesz-roundtrip",
            summary: "every module-linear functional is <x, .> for a unique x, recovered by a linear solve",
            default_module: rank2,
            runner: run_riesz_roundtrip,
        },
        SuiteDef {
            name: "self-duality",
            summary: "the dual has the same complex dimension as the module and the embedding is onto",
            default_module: rank2,
            runner: run_self_duality,
        },
        SuiteDef {
            name: "reflexivity",
            summary: "the canonical map into the double dual is an isomorphism with omega(x)(tau) = tau(x)*",
            default_module: rank2,
            runner: run_reflexivity,
        },
        SuiteDef {
            name: "khat-membership",
            summary: "every <x, .> lies in the span of the rank-one functionals y -> a <z, y>",
            default_module: rank2,
            runner: run_khat_membership,
        },
        SuiteDef {
            name: "linking-closure",
            summary: "corner elements [[b,x],[y*,a]] close under products and the involution on X (+) A",
            default_module: rank1,
            runner: run_linking_closure,
        },
        SuiteDef {
            name: "linking-representation",
            summary: "the concrete action satisfies phi(<x,y>) = Phi(x)* Phi(y) and Phi(xa) = Phi(x) phi(a), isometrically",
            default_module: rank1,
            runner: run_linking_representation,
        },
    ]
}

pub fn find_suite(name: &str) -> Result<&'static SuiteDef> {
    suite_defs()
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| CoreError::Parse(format!("unknown suite `{name}`")))
}

pub fn list_suites() -> Vec<(&'static str, &'static str)> {
    suite_defs().iter().map(|d| (d.name, d.summary)).collect()
}

/// Resolved inputs for one suite run.
pub struct SuiteContext {
    pub config: SuiteConfig,
    pub tols: Tolerances,
    pub algebra: AlgebraDescriptor,
    pub space: ModuleSpace,
}

/// Run a suite from its configuration. The report is a pure function of the
/// configuration (wall time excluded).
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let def = find_suite(&config.suite)?;
    let tols = Tolerances::default().with_overrides(&config.tolerance_overrides)?;
    let algebra: AlgebraDescriptor = config.algebra.parse()?;
    let mut config = config.clone();
    if config.module.is_empty() {
        config.module = (def.default_module)(&config.algebra);
    }
    let space = parse_module_spec(&config.module)?;
    if space.algebra() != &algebra {
        return Err(CoreError::Parse(format!(
            "module `{}` is not over algebra `{}`",
            config.module, config.algebra
        )));
    }
    let start = std::time::Instant::now();
    let ctx = SuiteContext {
        config,
        tols,
        algebra,
        space,
    };
    let mut report = (def.runner)(&ctx)?;
    report.wall_ms = start.elapsed().as_millis();
    Ok(report)
}

// ---------------------------------------------------------------------------
// trial harness

/// Collects per-property residuals across trials.
struct Harness<'a> {
    ctx: &'a SuiteContext,
    properties: &'static [&'static str],
    stats: Vec<PropertyStat>,
    exemplars: Vec<FailureExemplar>,
    passes: u64,
    failures: u64,
}

/// Residual sink for one trial.
pub struct TrialSink {
    results: Vec<(usize, f64, bool, Option<Value>)>,
}

impl TrialSink {
    /// Record a property's residual. `input` is built only on failure.
    fn record(&mut self, prop: usize, residual: f64, pass: bool, input: impl FnOnce() -> Value) {
        let payload = if pass { None } else { Some(input()) };
        self.results.push((prop, residual, pass, payload));
    }
}

impl<'a> Harness<'a> {
    fn new(ctx: &'a SuiteContext, properties: &'static [&'static str]) -> Self {
        Harness {
            ctx,
            properties,
            stats: properties
                .iter()
                .map(|p| PropertyStat {
                    property: p.to_string(),
                    failures: 0,
                    worst_residual: 0.0,
                })
                .collect(),
            exemplars: Vec::new(),
            passes: 0,
            failures: 0,
        }
    }

    fn run(
        mut self,
        mut per_trial: impl FnMut(&mut ChaCha8Rng, &mut TrialSink) -> Result<()>,
    ) -> Result<VerificationReport> {
        for trial in 0..self.ctx.config.trials {
            let mut rng = trial_rng(self.ctx.config.seed, trial);
            let mut sink = TrialSink {
                results: Vec::new(),
            };
            per_trial(&mut rng, &mut sink)?;
            let mut trial_pass = true;
            for (prop, residual, pass, input) in sink.results {
                let stat = &mut self.stats[prop];
                if residual.is_nan() || residual > stat.worst_residual {
                    stat.worst_residual = if residual.is_nan() { f64::INFINITY } else { residual };
                }
                if !pass {
                    trial_pass = false;
                    stat.failures += 1;
                    if self.exemplars.len() < MAX_EXEMPLARS {
                        self.exemplars.push(FailureExemplar {
                            trial,
                            property: self.properties[prop].to_string(),
                            residual,
                            input: input.unwrap_or(Value::Null),
                        });
                    }
                }
            }
            if trial_pass {
                self.passes += 1;
            } else {
                self.failures += 1;
            }
        }
        Ok(VerificationReport {
            suite: self.ctx.config.suite.clone(),
            config: self.ctx.config.clone(),
            trials: self.ctx.config.trials,
            passes: self.passes,
            failures: self.failures,
            properties: self.stats,
            exemplars: self.exemplars,
            wall_ms: 0,
        })
    }
}

fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

// ---------------------------------------------------------------------------
// suite runners

fn run_inner_product_axioms(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &[
        "positivity",
        "second-slot-linearity",
        "action-compatibility",
        "conjugate-symmetry",
    ];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let x = space.random_vector(rng);
        let y = space.random_vector(rng);
        let z = space.random_vector(rng);
        let a = space.algebra().random_element(rng);
        let lam = random_complex(rng);

        let xx = x.inner(&x);
        let verdict = xx.is_positive(tols.herm, tols.pos);
        let min_eig = xx
            .hermitian_eigen(tols.herm.max(1e-6))
            .map(|e| e.spectrum.min())
            .unwrap_or(f64::NEG_INFINITY);
        let pos_res = (-min_eig).max(0.0) / rel(xx.norm());
        sink.record(0, pos_res, verdict.positive, || x.to_json());

        let lhs = x.inner(&y.add(&z.scal(lam)));
        let rhs = x.inner(&y).add(&x.inner(&z).scal(lam));
        let scale = rel(lhs.max_abs_entry());
        let lin_res = lhs.sub(&rhs).max_abs_entry() / scale;
        sink.record(1, lin_res, lin_res <= tols.norm, || {
            serde_json::json!({"x": x.to_json(), "y": y.to_json(), "z": z.to_json()})
        });

        let lhs2 = x.inner(&y.act(&a));
        let rhs2 = x.inner(&y).mul(&a);
        let act_res = lhs2.sub(&rhs2).max_abs_entry() / rel(lhs2.max_abs_entry());
        sink.record(2, act_res, act_res <= tols.norm, || {
            serde_json::json!({"x": x.to_json(), "y": y.to_json(), "a": a.to_json()})
        });

        let conj_res = y.inner(&x).sub(&x.inner(&y).star()).max_abs_entry()
            / rel(x.inner(&y).max_abs_entry());
        sink.record(3, conj_res, conj_res <= tols.norm, || {
            serde_json::json!({"x": x.to_json(), "y": y.to_json()})
        });
        Ok(())
    })
}

fn run_cauchy_schwarz(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["operator-positivity", "scalar-corollary"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let x = space.random_vector(rng);
        let y = space.random_vector(rng);
        let cs = mchecks::cauchy_schwarz_residual(&x, &y, &tols);
        let res = (-cs.min_eigenvalue).max(0.0) / rel(cs.residual.norm());
        sink.record(0, res, cs.verdict.positive, || {
            serde_json::json!({"x": x.to_json(), "y": y.to_json()})
        });
        let violation = mchecks::scalar_cauchy_schwarz_violation(&x, &y);
        sink.record(1, violation, violation <= tols.norm, || {
            serde_json::json!({"x": x.to_json(), "y": y.to_json()})
        });
        Ok(())
    })
}

fn run_norm_duality(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["upper-bound", "sup-attainment"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let x = space.random_unit_vector(rng);
        let report = mchecks::norm_duality_check(&x, rng, 8)?;
        sink.record(0, report.max_violation, report.max_violation <= tols.norm, || x.to_json());
        sink.record(
            1,
            report.attainment_gap,
            report.attainment_gap <= tols.norm,
            || x.to_json(),
        );
        Ok(())
    })
}

fn run_right_action_norm(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["inequality", "unit-equality", "zero-action"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let x = space.random_vector(rng);
        let a = space.algebra().random_element(rng);
        let violation = mchecks::right_action_norm_violation(&x, &a);
        sink.record(0, violation, violation <= tols.norm, || {
            serde_json::json!({"x": x.to_json(), "a": a.to_json()})
        });
        let unit_gap =
            (x.act(&space.algebra().unit()).scalar_norm() - x.scalar_norm()).abs() / rel(x.scalar_norm());
        sink.record(1, unit_gap, unit_gap <= tols.norm, || x.to_json());
        let zero_norm = x.act(&space.algebra().zero()).scalar_norm();
        sink.record(2, zero_norm, zero_norm == 0.0, || x.to_json());
        Ok(())
    })
}

fn run_tensor_positivity(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["gram-positivity", "cancellation-vanishes"];
    let space = ctx.space.clone();
    let dim_h = match space.kind() {
        ModuleKind::Tensor { dim_h } => *dim_h,
        _ => {
            return Err(CoreError::Parse(
                "tensor-positivity needs a tensor module, e.g. tensor(dim=3, M2)".into(),
            ))
        }
    };
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let terms: Vec<(Vec<C64>, crate::algebra::AlgElement)> = (0..3)
            .map(|_| {
                let xi: Vec<C64> = (0..dim_h).map(|_| random_complex(rng)).collect();
                (xi, space.algebra().random_element(rng))
            })
            .collect();
        let tg = mchecks::gram_positivity(&space, &terms, &tols)?;
        let min_eig = tg
            .gram
            .hermitian_eigen(tols.herm.max(1e-6))
            .map(|e| e.spectrum.min())
            .unwrap_or(f64::NEG_INFINITY);
        let res = (-min_eig).max(0.0) / rel(tg.gram.norm());
        sink.record(0, res, tg.verdict.positive, || tg.element.to_json());

        // cancelling pair: u + (-u) has zero Gram element and is zero
        let xi: Vec<C64> = (0..dim_h).map(|_| random_complex(rng)).collect();
        let neg: Vec<C64> = xi.iter().map(|z| -z).collect();
        let a = space.algebra().random_element(rng);
        let tg2 = mchecks::gram_positivity(&space, &[(xi, a.clone()), (neg, a)], &tols)?;
        let res2 = tg2.gram.max_abs_entry().max(tg2.element.max_abs_entry());
        sink.record(1, res2, res2 <= tols.zero * 1e2, || tg2.element.to_json());
        Ok(())
    })
}

fn run_complement(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &[
        "sum-is-whole",
        "intersection-trivial",
        "double-complement",
        "right-invariance",
    ];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let n_gens = 1 + (rng.gen::<u64>() % 2) as usize;
        let gens: Vec<_> = (0..n_gens).map(|_| space.random_vector(rng)).collect();
        let f = Submodule::generate(&space, &gens)?;
        let report = mchecks_complement(&f, &tols)?;
        let dims = serde_json::json!({
            "dim_f": report.dim_f, "dim_fperp": report.dim_fperp, "dim_x": report.dim_space,
        });
        sink.record(0, 0.0, report.sum_is_whole, || dims.clone());
        sink.record(1, 0.0, report.intersection_trivial, || dims.clone());
        sink.record(2, 0.0, report.double_complement_is_f, || dims.clone());
        sink.record(
            3,
            report.right_invariance_residual,
            report.right_invariance_residual <= tols.sub,
            || dims.clone(),
        );
        Ok(())
    })
}

use crate::module::submodule::complement_checks as mchecks_complement;

fn run_fullness(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["xa-spans-module", "configured-module-full", "ideal-block-support"];
    let space = ctx.space.clone();
    let algebra = ctx.algebra.clone();
    // fullness of the configured module, compared against the block-support
    // expectation (free/tensor modules reach every block; an ideal reaches
    // the blocks where its generator does not vanish)
    let expected_full = expected_fullness(&space);
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let spans = mchecks::xa_spans_space(&space);
        sink.record(0, 0.0, spans, || serde_json::json!(space.spec_string()));
        let full = mchecks::is_full(&space);
        sink.record(1, 0.0, full == expected_full, || {
            serde_json::json!({"computed": full, "expected": expected_full})
        });

        // random principal ideal: fullness iff the generator touches every block
        let mut g = algebra.random_element(rng);
        // zero out each block with probability 1/2 (keep at least one)
        let blocks = algebra.blocks().len();
        let keep = (rng.gen::<u64>() % (1u64 << blocks).max(2)).max(1);
        let mut coords = g.coords();
        let mut offset = 0;
        for (k, &n) in algebra.blocks().iter().enumerate() {
            if keep & (1 << k) == 0 {
                for c in coords[offset..offset + n * n].iter_mut() {
                    *c = crate::linalg::ZERO;
                }
            }
            offset += n * n;
        }
        g = crate::algebra::AlgElement::from_coords(&algebra, &coords).unwrap();
        let expected = (0..blocks).all(|k| keep & (1 << k) != 0);
        let ideal = ModuleSpace::ideal(algebra.clone(), g.clone(), "random")?;
        let got = mchecks::is_full(&ideal);
        sink.record(2, 0.0, got == expected, || {
            serde_json::json!({"generator": g.to_json(), "expected": expected, "computed": got})
        });
        Ok(())
    })
}

/// Expected fullness by block support: free and tensor modules are full;
/// a principal ideal is full when its generator touches every block; a
/// direct sum is full when the union of part supports covers every block.
fn expected_fullness(space: &ModuleSpace) -> bool {
    fn support(space: &ModuleSpace, out: &mut Vec<bool>) {
        match space.kind() {
            ModuleKind::Free { .. } | ModuleKind::Tensor { .. } => out.fill(true),
            ModuleKind::Ideal { generator, .. } => {
                for (k, b) in generator.blocks().iter().enumerate() {
                    if b.max_abs() > 0.0 {
                        out[k] = true;
                    }
                }
            }
            ModuleKind::DirectSum { parts } => {
                for p in parts {
                    support(p, out);
                }
            }
        }
    }
    let mut out = vec![false; space.algebra().blocks().len()];
    support(space, &mut out);
    out.into_iter().all(|b| b)
}

fn run_adjoint_roundtrip(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["involution", "product-reversal", "adjoint-identity"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let s = AdjointableOp::random(&space, rng, &tols)?;
        let t = AdjointableOp::random(&space, rng, &tols)?;
        let scale = rel(t.matrix().max_abs());
        let invol = t.adjoint_op().adjoint_op().matrix().sub(t.matrix()).max_abs() / scale;
        sink.record(0, invol, invol <= tols.op, || t.to_json());
        let st = s.compose(&t)?;
        let rev = st
            .adjoint_matrix()
            .sub(&t.adjoint_matrix().matmul(s.adjoint_matrix()))
            .max_abs()
            / rel(st.matrix().max_abs());
        sink.record(1, rev, rev <= tols.op, || {
            serde_json::json!({"s": s.to_json(), "t": t.to_json()})
        });
        let ident = t.adjoint_identity_residual();
        sink.record(2, ident, ident <= tols.op, || t.to_json());
        Ok(())
    })
}

fn run_theta_identities(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["adjoint-swap", "composition", "left-absorption"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let x = space.random_vector(rng);
        let y = space.random_vector(rng);
        let u = space.random_vector(rng);
        let v = space.random_vector(rng);
        let t = AdjointableOp::random(&space, rng, &tols)?;
        let ids = theta_identities_check(&x, &y, &u, &v, &t, &tols)?;
        let payload = || {
            serde_json::json!({
                "x": x.to_json(), "y": y.to_json(), "u": u.to_json(), "v": v.to_json(),
            })
        };
        sink.record(0, ids.adjoint_residual, ids.adjoint_residual <= tols.op, payload);
        sink.record(1, ids.composition_residual, ids.composition_residual <= tols.op, payload);
        sink.record(2, ids.absorption_residual, ids.absorption_residual <= tols.op, payload);
        Ok(())
    })
}

fn run_compact_ideal(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["span-exhausts-linear-maps", "bi-ideal-membership"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    let span = compact_ideal(&space, &space)?;
    let endo_dim = module_linear_endo_dimension(&space);
    let dims_match = span.dim() == endo_dim;
    let span_dim = span.dim();
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        sink.record(0, 0.0, dims_match, || {
            serde_json::json!({"span_dim": span_dim, "endo_dim": endo_dim})
        });
        let t = AdjointableOp::random(&space, rng, &tols)?;
        let k = span.random_element(rng);
        let res = span.ideal_residual(&t, &k);
        sink.record(1, res, res <= tols.op, || t.to_json());
        Ok(())
    })
}

fn run_k_of_a(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &[
        "dimension-and-bijectivity",
        "generator-formula",
        "star-compatibility",
        "multiplicativity",
        "unital-collapse",
    ];
    if ctx.space.rank() != 1 || !matches!(ctx.space.kind(), ModuleKind::Free { .. }) {
        return Err(CoreError::Parse(
            "k-of-a-iso runs on X = A; use the default module".into(),
        ));
    }
    let algebra = ctx.algebra.clone();
    let tols = ctx.tols;
    // structural facts once
    let mut probe_rng = trial_rng(ctx.config.seed, u64::MAX);
    let base = crate::operator::k_of_a_isomorphism(&algebra, &mut probe_rng, 2, &tols)?;
    let structural = base.span_dim == base.algebra_dim && base.bijective;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        sink.record(0, 0.0, structural, || {
            serde_json::json!({"span_dim": base.span_dim, "algebra_dim": base.algebra_dim})
        });
        let r = crate::operator::k_of_a_isomorphism(&algebra, rng, 1, &tols)?;
        sink.record(1, r.generator_formula_residual, r.generator_formula_residual <= tols.op, || Value::Null);
        sink.record(2, r.star_residual, r.star_residual <= tols.op, || Value::Null);
        sink.record(3, r.mult_residual, r.mult_residual <= tols.op, || Value::Null);
        sink.record(4, r.unital_collapse_residual, r.unital_collapse_residual <= tols.op, || Value::Null);
        Ok(())
    })
}

fn run_cstar_identity(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["identity-gap", "probe-attainment"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let t = AdjointableOp::random(&space, rng, &tols)?;
        let gap = t.cstar_identity_gap()?;
        sink.record(0, gap, gap <= tols.opnorm, || t.to_json());
        let probe = t.probe_norm_gap(rng, 32)?;
        sink.record(1, probe, probe <= tols.iso, || t.to_json());
        Ok(())
    })
}

fn run_hat_isometry(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["isometry", "module-linearity"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let x = space.random_vector(rng);
        let h = duality::hat(&x);
        let gap = (h.norm()? - x.scalar_norm()).abs() / rel(x.scalar_norm());
        sink.record(0, gap, gap <= tols.iso, || x.to_json());
        let lin = h.module_linearity_residual();
        sink.record(1, lin, lin <= tols.op, || x.to_json());
        Ok(())
    })
}

fn run_riesz_roundtrip(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["hat-roundtrip", "functional-solve"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let x = space.random_vector(rng);
        let (back, res) = duality::riesz_solve(&duality::hat(&x))?;
        let rt = back.sub(&x).max_abs_entry() / rel(x.max_abs_entry());
        sink.record(0, rt.max(res), rt.max(res) <= tols.op, || x.to_json());

        let tau = duality::DualFunctional::random(&space, rng);
        let (sol, res2) = duality::riesz_solve(&tau)?;
        let gap = duality::hat(&sol).matrix().sub(tau.matrix()).max_abs()
            / rel(tau.matrix().max_abs());
        let worst = res2.max(gap);
        sink.record(1, worst, worst <= tols.op, || tau.to_json());
        Ok(())
    })
}

fn run_self_duality(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["dimension-match", "embedding-onto"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    let dual_dim = duality::dual_dimension(&space);
    let dims_match = dual_dim == space.complex_dim();
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        sink.record(0, 0.0, dims_match, || {
            serde_json::json!({"dual_dim": dual_dim, "module_dim": space.complex_dim()})
        });
        let tau = duality::DualFunctional::random(&space, rng);
        let (sol, res) = duality::riesz_solve(&tau)?;
        let gap = duality::hat(&sol).matrix().sub(tau.matrix()).max_abs()
            / rel(tau.matrix().max_abs());
        let worst = res.max(gap);
        sink.record(1, worst, worst <= tols.op, || tau.to_json());
        Ok(())
    })
}

fn run_reflexivity(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["iso-structure", "evaluation", "embedding-consistency"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    let mut probe_rng = trial_rng(ctx.config.seed, u64::MAX);
    let base = duality::reflexivity_check(&space, &mut probe_rng, 1, &tols)?;
    let structural = base.module_dim == base.bidual_dim && base.omega_injective;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        sink.record(0, 0.0, structural, || {
            serde_json::json!({"module_dim": base.module_dim, "bidual_dim": base.bidual_dim})
        });
        let x = space.random_vector(rng);
        let y = space.random_vector(rng);
        let om = duality::omega(&x);
        let val = om.apply(&duality::hat(&y))?;
        let expect = x.inner(&y);
        let ev = val.sub(&expect).max_abs_entry() / rel(expect.max_abs_entry());
        sink.record(1, ev, ev <= tols.op, || {
            serde_json::json!({"x": x.to_json(), "y": y.to_json()})
        });
        let cons = om.matrix().sub(duality::hat(&x).matrix()).max_abs()
            / rel(om.matrix().max_abs());
        sink.record(2, cons, cons <= tols.op, || x.to_json());
        Ok(())
    })
}

fn run_khat_membership(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["membership", "single-term-identity"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    let a_module = ModuleSpace::over_itself(ctx.algebra.clone())?;
    let span = compact_ideal(&a_module, &space)?;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let x = space.random_vector(rng);
        let res = span.membership_residual(duality::hat(&x).matrix());
        sink.record(0, res, res <= tols.op, || x.to_json());

        // x = z a*: hat(x) = theta_{a, z}
        let z = space.random_vector(rng);
        let a = space.algebra().random_element(rng);
        let single = z.act(&a.star());
        let va = a_module.vector(vec![a.clone()], &tols)?;
        let th = theta(&va, &z, &tols)?;
        let gap = duality::hat(&single)
            .matrix()
            .sub(th.op().matrix())
            .max_abs()
            / rel(th.op().matrix().max_abs());
        sink.record(1, gap, gap <= tols.op, || {
            serde_json::json!({"z": z.to_json(), "a": a.to_json()})
        });
        Ok(())
    })
}

fn run_linking_closure(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["product-corner", "star-corner", "involution"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    let link = LinkingAlgebra::new(&space)?;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let e1 = link.random_element(rng, &tols)?;
        let e2 = link.random_element(rng, &tols)?;
        let (_, corner) = link.mul(&e1, &e2, &tols)?;
        sink.record(0, corner, corner <= tols.op, || e1.to_json());
        let (starred, star_res) = link.star(&e1, &tols)?;
        sink.record(1, star_res, star_res <= tols.op, || e1.to_json());
        let (back, _) = link.star(&starred, &tols)?;
        let invol = back.matrix().sub(e1.matrix()).max_abs() / rel(e1.matrix().max_abs());
        sink.record(2, invol, invol <= tols.op, || e1.to_json());
        Ok(())
    })
}

fn run_linking_representation(ctx: &SuiteContext) -> Result<VerificationReport> {
    const PROPS: &[&str] = &["inner-product-identity", "action-identity", "isometry", "faithfulness"];
    let space = ctx.space.clone();
    let tols = ctx.tols;
    let link = LinkingAlgebra::new(&space)?;
    Harness::new(ctx, PROPS).run(move |rng, sink| {
        let x = space.random_vector(rng);
        let y = space.random_vector(rng);
        let a = space.algebra().random_element(rng);
        let phi_x = link.embed_module(&x, &tols)?;
        let phi_y = link.embed_module(&y, &tols)?;
        let phi_a = link.embed_algebra(&a, &tols)?;
        let phi_xy = link.embed_algebra(&x.inner(&y), &tols)?;
        let lhs = phi_x.matrix().adjoint().matmul(phi_y.matrix());
        let inner_res = lhs.sub(phi_xy.matrix()).max_abs() / rel(lhs.max_abs());
        sink.record(0, inner_res, inner_res <= tols.op, || {
            serde_json::json!({"x": x.to_json(), "y": y.to_json()})
        });
        let phi_xa = link.embed_module(&x.act(&a), &tols)?;
        let rhs = phi_x.matrix().matmul(phi_a.matrix());
        let act_res = rhs.sub(phi_xa.matrix()).max_abs() / rel(rhs.max_abs());
        sink.record(1, act_res, act_res <= tols.op, || {
            serde_json::json!({"x": x.to_json(), "a": a.to_json()})
        });
        let iso = (phi_x.norm()? - x.scalar_norm()).abs() / rel(x.scalar_norm());
        sink.record(2, iso, iso <= tols.iso, || x.to_json());
        let e = link.random_element(rng, &tols)?;
        let back = link.extract(e.matrix(), &tols)?;
        let rt = back.matrix().sub(e.matrix()).max_abs() / rel(e.matrix().max_abs());
        sink.record(3, rt, rt <= tols.op, || e.to_json());
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suite: &str, algebra: &str, trials: u64) -> SuiteConfig {
        SuiteConfig::new(suite, algebra, "", trials, 42)
    }

    #[test]
    fn registry_is_complete() {
        let names: Vec<&str> = list_suites().iter().map(|(n, _)| *n).collect();
        assert!(names.len() >= 12);
        for expected in [
            "inner-product-axioms",
            "cauchy-schwarz",
            "norm-duality",
            "right-action-norm",
            "tensor-positivity",
            "complement",
            "fullness",
            "adjoint-roundtrip",
            "theta-identities",
            "compact-ideal",
            "k-of-a-iso",
            "cstar-identity",
            "hat-isometry",
            "riesz-roundtrip",
            "self-duality",
            "reflexivity",
            "khat-membership",
            "linking-closure",
            "linking-representation",
        ] {
            assert!(names.contains(&expected), "missing suite {expected}");
        }
        assert!(find_suite("nope").is_err());
    }

    #[test]
    fn every_suite_passes_a_smoke_run() {
        for def in suite_defs() {
            let config = cfg(def.name, "M2", 3);
            let report = run_suite(&config).unwrap();
            assert!(
                report.passed(),
                "suite {} failed: {}",
                def.name,
                report.to_json_string()
            );
            assert_eq!(report.trials, 3);
            assert_eq!(report.passes + report.failures, report.trials);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let config = cfg("cauchy-schwarz", "M2+C", 10);
        let a = run_suite(&config).unwrap().to_json_string();
        let b = run_suite(&config).unwrap().to_json_string();
        assert_eq!(a, b);
        // a different seed changes the residuals
        let mut config2 = cfg("cauchy-schwarz", "M2+C", 10);
        config2.seed = 7;
        let c = run_suite(&config2).unwrap().to_json_string();
        assert_ne!(a, c);
    }

    #[test]
    fn usage_errors_are_parse_errors() {
        assert!(matches!(
            run_suite(&cfg("no-such-suite", "M2", 1)),
            Err(CoreError::Parse(_))
        ));
        assert!(matches!(
            run_suite(&cfg("cauchy-schwarz", "M2", 0)),
            Err(CoreError::Parse(_))
        ));
        assert!(matches!(
            run_suite(&cfg("cauchy-schwarz", "Mx", 5)),
            Err(CoreError::Parse(_))
        ));
        // module over the wrong algebra
        let mut bad = cfg("cauchy-schwarz", "M2", 5);
        bad.module = "free(M3, rank=1)".into();
        assert!(matches!(run_suite(&bad), Err(CoreError::Parse(_))));
    }

    #[test]
    fn tolerance_overrides_flow_through() {
        let mut config = cfg("cauchy-schwarz", "M2", 5);
        // absurdly tight positivity tolerance forces failures
        config
            .tolerance_overrides
            .insert("pos".into(), 0.0);
        config.tolerance_overrides.insert("norm".into(), 1e-30);
        let report = run_suite(&config).unwrap();
        assert!(report.failures > 0, "{}", report.to_json_string());
        assert!(!report.exemplars.is_empty());
        assert!(report.exemplars.len() <= MAX_EXEMPLARS);
    }
}
