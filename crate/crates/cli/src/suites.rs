//! Verification suites. Each suite is a list of tasks; a task computes one
//! or more report entries and runs on the rayon pool.

use std::collections::BTreeMap;
use std::time::Instant;

use gklandau::displacement::{
    bch_check, displacement_u, gk_relabel, infinitesimal_displacement, two_mode_amplitude, two_mode_cs,
    weyl_heisenberg_u, weyl_relation_defect, CsWeights, DisplacementParams, Mode, UnitaryOperatorCs,
};
use gklandau::fock::{
    commutator, helicity_ops, ladder, quadratures, FockSpace, HelicityOp, OperatorMatrix, ProductSpace, QuadratureMode,
};
use gklandau::gkcs::{
    action_continuous, action_identity_discrete, build_cs, continuous_norm, family_norm, invert_action, required_n_max,
    resolution_of_identity_check, temporal_stability, GkCsLabel, ResolutionOrders, TAIL_LIMIT,
};
use gklandau::hamiltonians::{build_h1, helicity_hamiltonians, spectrum_h1, spectrum_h1_fd, tensor_decompose_h};
use gklandau::scalar::cis;
use gklandau::wigner::{wigner_point, DyadTable, GridSpec};
use gklandau::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{Quantity, ReportEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Algebra,
    Hamiltonians,
    Wigner,
    Gkcs,
    Displacement,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 5] = [
        Suite::Algebra,
        Suite::Hamiltonians,
        Suite::Wigner,
        Suite::Gkcs,
        Suite::Displacement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Hamiltonians => "hamiltonians",
            Suite::Wigner => "wigner",
            Suite::Gkcs => "gkcs",
            Suite::Displacement => "displacement",
            Suite::All => "all",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::MODULES.into_iter().chain([Suite::All]).find(|s| s.name() == name)
    }
}

/// Outcome of one entry before timing is attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub computed: Quantity,
    pub expected: Quantity,
    pub pass: bool,
}

impl Outcome {
    /// `defect <= tol` against an expected zero.
    pub fn bound(defect: f64, tol: f64) -> Self {
        Self {
            computed: Quantity::Real(defect),
            expected: Quantity::Real(0.0),
            pass: defect <= tol,
        }
    }

    pub fn close(computed: f64, expected: f64, tol: f64) -> Self {
        Self {
            computed: Quantity::Real(computed),
            expected: Quantity::Real(expected),
            pass: (computed - expected).abs() <= tol,
        }
    }

    pub fn close_complex(computed: Complex64, expected: Complex64, tol: f64) -> Self {
        Self {
            computed: Quantity::Complex {
                re: computed.re,
                im: computed.im,
            },
            expected: Quantity::Complex {
                re: expected.re,
                im: expected.im,
            },
            pass: (computed - expected).norm() <= tol,
        }
    }

    /// `|computed - expected| <= tol * |expected|`.
    pub fn relative(computed: f64, expected: f64, tol: f64) -> Self {
        Self {
            computed: Quantity::Real(computed),
            expected: Quantity::Real(expected),
            pass: (computed - expected).abs() <= tol * expected.abs(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Planned {
    pub id: String,
    pub inputs: BTreeMap<String, Value>,
    pub tol: f64,
}

type Runner = Box<dyn FnOnce(&[Planned]) -> gklandau::Result<Vec<Outcome>> + Send>;

pub struct Task {
    planned: Vec<Planned>,
    run: Runner,
}

impl Task {
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.planned.iter().map(|p| p.id.as_str())
    }

    fn execute(self) -> Vec<ReportEntry> {
        let start = Instant::now();
        let result = (self.run)(&self.planned);
        let runtime_ms = start.elapsed().as_millis() as u64;
        let entry = |p: Planned, o: Option<Outcome>, error: Option<String>| ReportEntry {
            check_id: p.id,
            inputs: p.inputs,
            computed: o.map_or(Quantity::Missing, |o| o.computed),
            expected: o.map_or(Quantity::Missing, |o| o.expected),
            tol: p.tol,
            pass: o.is_some_and(|o| o.pass),
            runtime_ms,
            error,
        };
        match result {
            Ok(outcomes) if outcomes.len() == self.planned.len() => self
                .planned
                .into_iter()
                .zip(outcomes)
                .map(|(p, o)| entry(p, Some(o), None))
                .collect(),
            Ok(_) => self
                .planned
                .into_iter()
                .map(|p| entry(p, None, Some("internal: outcome count mismatch".into())))
                .collect(),
            Err(e) => self
                .planned
                .into_iter()
                .map(|p| entry(p, None, Some(e.to_string())))
                .collect(),
        }
    }
}

struct Builder<'a> {
    cfg: &'a RunConfig,
    suite: Suite,
    tasks: Vec<Task>,
}

fn inputs(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

impl<'a> Builder<'a> {
    fn plan(&self, id: impl Into<String>, inputs: BTreeMap<String, Value>, default_tol: f64) -> Planned {
        Planned {
            id: id.into(),
            inputs,
            tol: self.cfg.tolerance(self.suite, default_tol),
        }
    }

    /// A task with one entry.
    fn one<F>(&mut self, id: impl Into<String>, pairs: &[(&str, Value)], tol: f64, f: F)
    where
        F: FnOnce(f64) -> gklandau::Result<Outcome> + Send + 'static,
    {
        let planned = vec![self.plan(id, inputs(pairs), tol)];
        self.tasks.push(Task {
            planned,
            run: Box::new(move |p: &[Planned]| Ok(vec![f(p[0].tol)?])),
        });
    }

    fn many<F>(&mut self, planned: Vec<Planned>, f: F)
    where
        F: FnOnce(&[Planned]) -> gklandau::Result<Vec<Outcome>> + Send + 'static,
    {
        self.tasks.push(Task {
            planned,
            run: Box::new(f),
        });
    }
}

/// Builds the tasks of a suite; `All` concatenates the module suites.
pub fn tasks(suite: Suite, cfg: &RunConfig) -> Vec<Task> {
    if suite == Suite::All {
        return Suite::MODULES.into_iter().flat_map(|s| tasks(s, cfg)).collect();
    }
    let mut b = Builder {
        cfg,
        suite,
        tasks: Vec::new(),
    };
    match suite {
        Suite::Algebra => algebra(&mut b),
        Suite::Hamiltonians => hamiltonians(&mut b),
        Suite::Wigner => wigner(&mut b),
        Suite::Gkcs => gkcs(&mut b),
        Suite::Displacement => displacement(&mut b),
        Suite::All => unreachable!(),
    }
    b.tasks
}

/// Runs the tasks concurrently and returns entries sorted by `check_id`.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Vec<ReportEntry> {
    let mut entries: Vec<ReportEntry> = tasks(suite, cfg).into_par_iter().flat_map_iter(Task::execute).collect();
    entries.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    entries
}

fn algebra(b: &mut Builder) {
    let params = b.cfg.params;
    let dim = b.cfg.truncations.dim;
    let hdim = b.cfg.truncations.helicity_dim;

    let expected = 2.0 * params.mass * params.hbar * params.omega_c;
    b.one(
        "ladder_commutator",
        &[("dim", json!(dim)), ("scale", json!(expected))],
        1e-10,
        move |tol| {
            let space = FockSpace::new(dim)?;
            let (l, r) = ladder(space, params.ladder_scale())?;
            let c = commutator(&l, &r)?;
            let shifted = &c - &OperatorMatrix::identity(space).scale_real(expected);
            Ok(Outcome::bound(shifted.interior_max_abs(), tol))
        },
    );

    b.one("quadrature_commutator", &[("dim", json!(dim))], 1e-10, move |tol| {
        let space = FockSpace::new(dim)?;
        let (q, p) = quadratures(space, &params, QuadratureMode::Q1P1)?;
        let c = commutator(&q, &p)?;
        let want = OperatorMatrix::identity(space).scale(Complex64::new(0.0, 2.0 * params.mass * params.omega_c));
        Ok(Outcome::bound((&c - &want).interior_max_abs(), tol))
    });

    b.one("quadrature_hermitian", &[("dim", json!(dim))], 1e-14, move |tol| {
        let space = FockSpace::new(dim)?;
        let (q, p) = quadratures(space, &params, QuadratureMode::TildeQ2P2)?;
        Ok(Outcome::bound(q.hermiticity_defect().max(p.hermiticity_defect()), tol))
    });

    let planned: Vec<Planned> = HelicityOp::ALL
        .iter()
        .flat_map(|&x| HelicityOp::ALL.iter().map(move |&y| (x, y)))
        .map(|(x, y)| {
            b.plan(
                format!("helicity_commutator[{},{}]", x.name(), y.name()),
                inputs(&[("dim", json!(hdim)), ("expected", json!(x.expected_commutator(y)))]),
                1e-10,
            )
        })
        .collect();
    b.many(planned, move |p| {
        let ops = helicity_ops(FockSpace::new(hdim)?, &params)?;
        Ok(ops
            .commutator_defects()?
            .into_iter()
            .zip(p)
            .map(|(d, p)| Outcome::bound(d.defect, p.tol))
            .collect())
    });
}

fn hamiltonians(b: &mut Builder) {
    let params = b.cfg.params;
    let (nb, nd) = b.cfg.truncations.spectrum;
    let hdim = b.cfg.truncations.helicity_dim;
    let dim = b.cfg.truncations.dim;

    let free = params.with_lambda(0.0);
    let planned: Vec<Planned> = (0..nb - 1)
        .map(|n| {
            b.plan(
                format!("h1_degeneracy[n={n:02}]"),
                inputs(&[
                    ("n", json!(n)),
                    ("N_b", json!(nb)),
                    ("N_d", json!(nd)),
                    ("lambda", json!(0.0)),
                ]),
                1e-9,
            )
        })
        .collect();
    b.many(planned, move |p| {
        let ev = build_h1(&free, (nb, nd))?.total.hermitian_eigenvalues()?;
        Ok(p.iter()
            .enumerate()
            .map(|(n, p)| {
                let target = free.hbar * free.omega_c * (n as f64 + 0.5);
                // the truncated top level sits at hbar omega_c (N_b - 1) / 2
                let edge = free.hbar * free.omega_c * (nb - 1) as f64 / 2.0;
                let mult = if (edge - target).abs() <= p.tol { 2 * nd } else { nd };
                let mut dist: Vec<f64> = ev.iter().map(|e| (e - target).abs()).collect();
                dist.sort_by(f64::total_cmp);
                let worst = dist[mult - 1];
                let exact = dist.get(mult).is_none_or(|d| *d > p.tol);
                let mut o = Outcome::bound(worst, p.tol);
                o.pass &= exact;
                o
            })
            .collect())
    });

    for n in 0..=3usize {
        for alpha in [-1.0, 0.0, 1.0] {
            b.one(
                format!("h1_fd_oracle[n={n},alpha={alpha}]"),
                &[
                    ("n", json!(n)),
                    ("alpha", json!(alpha)),
                    ("oracle", json!("finite difference")),
                ],
                1e-4,
                move |tol| {
                    let exact = spectrum_h1(n, alpha, &params).energy;
                    let fd = spectrum_h1_fd(n, alpha, &params)?.energy;
                    Ok(Outcome::close(exact, fd, tol))
                },
            );
        }
    }

    b.one(
        "helicity_tilde_plus_identity",
        &[("dim", json!(hdim))],
        1e-12,
        move |tol| {
            let space = FockSpace::new(hdim)?;
            let hh = helicity_hamiltonians(&params, space)?;
            let ops = helicity_ops(space, &params)?;
            let two = ProductSpace::new(vec![space, space])?;
            let lb = params.lambda_bar() / 2.0;
            let sym = (ops.get(HelicityOp::TildeAMinus) + ops.get(HelicityOp::TildeAMinusStar))
                .scale_real(lb)
                .embed(&two, 1)?;
            let anti = (ops.get(HelicityOp::AMinusStar) - ops.get(HelicityOp::AMinus))
                .scale(Complex64::new(0.0, lb))
                .embed(&two, 1)?;
            let diff = &hh.h_tilde_plus.matrix - &hh.h_plus.matrix;
            Ok(Outcome::bound((&(&diff - &sym) + &anti).max_abs(), tol))
        },
    );

    b.one("tensor_h_d_spectrum", &[("dim", json!(dim))], 1e-10, move |tol| {
        let ev = tensor_decompose_h(&params, dim)?.h_d.hermitian_eigenvalues()?;
        let worst = (0..dim - 1)
            .map(|n| {
                let target = params.omega_c * (n as f64 + 0.5);
                ev.iter().map(|e| (e - target).abs()).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        Ok(Outcome::bound(worst, tol))
    });
}

fn wigner(b: &mut Builder) {
    let spec = b.cfg.grid();
    let wdim = b.cfg.truncations.wigner_dim;
    let (half, points) = (b.cfg.grid_half, b.cfg.grid_points);
    let grid_inputs = move |extra: &[(&str, Value)]| {
        let mut m = inputs(extra);
        m.insert("grid_half".into(), json!(half));
        m.insert("grid_points".into(), json!(points));
        m
    };
    let spec_for = move || -> gklandau::Result<GridSpec<f64>> { spec.clone() };

    let s = spec_for.clone();
    let tol = b.cfg.tolerance(b.suite, 1e-8);
    let planned = vec![Planned {
        id: "wigner_w00_origin".into(),
        inputs: grid_inputs(&[("n", json!(0)), ("l", json!(0))]),
        tol,
    }];
    b.many(planned, move |p| {
        let v = wigner_point(0, 0, 0.0, 0.0, &s()?)?;
        let want = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        Ok(vec![Outcome::close_complex(v, Complex64::new(want, 0.0), p[0].tol)])
    });

    let s = spec_for.clone();
    let planned = vec![b.plan(
        "wigner_w10_origin",
        grid_inputs(&[("n", json!(1)), ("l", json!(0))]),
        1e-12,
    )];
    b.many(planned, move |p| {
        let v = wigner_point(1, 0, 0.0, 0.0, &s()?)?;
        Ok(vec![Outcome::close_complex(v, Complex64::new(0.0, 0.0), p[0].tol)])
    });

    let gram_max = wdim.min(5);
    let planned = vec![
        b.plan(
            format!("wigner_gram[n,l<{gram_max}]"),
            grid_inputs(&[("dim", json!(gram_max))]),
            1e-4,
        ),
        b.plan(
            format!("wigner_round_trip[n,l<{wdim}]"),
            grid_inputs(&[("dim", json!(wdim))]),
            1e-4,
        ),
        b.plan(
            format!("wigner_transpose_symmetry[n,l<{wdim}]"),
            grid_inputs(&[("dim", json!(wdim))]),
            1e-10,
        ),
    ];
    b.many(planned, move |p| {
        let spec = spec_for()?;
        let table = DyadTable::full(wdim, &spec)?;
        let pairs = table.pairs().to_vec();

        let gram = table.gram();
        let mut gram_defect: f64 = 0.0;
        for (a, &(n1, l1)) in pairs.iter().enumerate() {
            for (c, &(n2, l2)) in pairs.iter().enumerate() {
                if n1.max(l1).max(n2).max(l2) >= gram_max {
                    continue;
                }
                let want = if a == c { 1.0 } else { 0.0 };
                gram_defect = gram_defect.max((gram[(a, c)] - Complex64::new(want, 0.0)).norm());
            }
        }

        let mut round_trip: f64 = 0.0;
        let mut transpose: f64 = 0.0;
        let (nx, ny) = (spec.nx, spec.ny);
        for &(n, l) in &pairs {
            let f = table.dyad(n, l).expect("pair in table");
            let back = table.inverse(&f, wdim)?;
            for r in 0..wdim {
                for c in 0..wdim {
                    let want = if (r, c) == (n, l) { 1.0 } else { 0.0 };
                    round_trip = round_trip.max((back.get(r, c) - Complex64::new(want, 0.0)).norm());
                }
            }
            let g = table.dyad(l, n).expect("pair in table");
            for i in 0..nx {
                for j in 0..ny {
                    let d = f.at(i, j) - g.at(nx - 1 - i, ny - 1 - j).conj();
                    transpose = transpose.max(d.norm());
                }
            }
        }
        Ok(vec![
            Outcome::bound(gram_defect, p[0].tol),
            Outcome::bound(round_trip, p[1].tol),
            Outcome::bound(transpose, p[2].tol),
        ])
    });
}

/// Discrete truncation: the configured one, or the smallest below the tail
/// limit.
fn n_max_for(cfg: &RunConfig, j: f64) -> usize {
    cfg.truncations.n_max.unwrap_or_else(|| required_n_max(j, TAIL_LIMIT))
}

/// `count` log-spaced points on `[lo, hi]`.
pub fn log_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

fn gkcs(b: &mut Builder) {
    let params = b.cfg.params;
    let label = b.cfg.label;

    for j in [0.5, 2.0, 5.0] {
        for k1 in [0.5, 1.0, 2.0] {
            for beta in [0.5, 1.0, 2.0] {
                let l = GkCsLabel { j, k1, beta, ..label };
                b.one(
                    format!("gkcs_norm[J={j},K1={k1},beta={beta}]"),
                    &[
                        ("J", json!(j)),
                        ("K1", json!(k1)),
                        ("beta", json!(beta)),
                        ("Jp", json!(label.jp)),
                    ],
                    1e-8,
                    move |tol| Ok(Outcome::close(family_norm(&l)?, 1.0, tol)),
                );
            }
        }
    }

    let (k1, beta) = (label.k1, label.beta);
    let norm_inputs = [
        ("K1", json!(k1)),
        ("beta", json!(beta)),
        ("tol_kind", json!("relative")),
        ("oracle", json!("adaptive quadrature")),
    ];
    let planned = vec![
        b.plan("continuous_norm_general", inputs(&norm_inputs), 1e-8),
        b.plan("continuous_norm_paper_branch", inputs(&norm_inputs), 1e-8),
    ];
    b.many(planned, move |p| {
        let n = continuous_norm(k1, beta)?;
        Ok(vec![
            Outcome::relative(n.general, n.oracle, p[0].tol),
            Outcome::relative(n.abs_erf, n.oracle, p[1].tol),
        ])
    });

    for (id, hi) in [
        ("continuous_norm_general_sweep", 4.0),
        ("continuous_norm_paper_sweep", 1.0),
    ] {
        let ks: Vec<f64> = log_points(0.25, 4.0, 9)
            .into_iter()
            .filter(|k| *k <= hi * (1.0 + 1e-12))
            .collect();
        let general = id.contains("general");
        b.one(
            id,
            &[
                ("K1", json!(ks)),
                ("beta", json!([0.5, 1.0, 2.0])),
                ("tol_kind", json!("relative")),
                ("oracle", json!("adaptive quadrature")),
            ],
            1e-8,
            move |tol| {
                let mut worst: f64 = 0.0;
                for &k in &ks {
                    for beta in [0.5, 1.0, 2.0] {
                        let n = continuous_norm(k, beta)?;
                        let v = if general { n.general } else { n.abs_erf };
                        worst = worst.max((v - n.oracle).abs() / n.oracle);
                    }
                }
                Ok(Outcome::bound(worst, tol))
            },
        );
    }

    b.one(
        "resolution_discrete[n<=20]",
        &[("n_max", json!(20)), ("l", json!(label.l))],
        1e-8,
        move |tol| {
            let d = resolution_of_identity_check(20, label.l, 2.0, 1.0, ResolutionOrders::default())?;
            Ok(Outcome::bound(d.discrete, tol))
        },
    );
    for beta in [0.5, 1.0, 2.0] {
        b.one(
            format!("resolution_continuous[beta={beta}]"),
            &[("beta", json!(beta)), ("E_max", json!(2.0))],
            1e-6,
            move |tol| {
                let d = resolution_of_identity_check(0, 0, 2.0, beta, ResolutionOrders::default())?;
                Ok(Outcome::bound(d.continuous, tol))
            },
        );
    }

    let n_max = n_max_for(b.cfg, label.j);
    for t in [0.1, 0.7, 3.0] {
        b.one(
            format!("temporal_stability[t={t}]"),
            &[("t", json!(t)), ("J", json!(label.j)), ("n_max", json!(n_max))],
            1e-8,
            move |tol| {
                Ok(Outcome::bound(
                    temporal_stability(&label, t, &params, n_max)?.fidelity_deficit,
                    tol,
                ))
            },
        );
    }

    let action = |b: &mut Builder, id: String, j: f64| {
        let l = GkCsLabel { j, ..label };
        let n_max = n_max_for(b.cfg, j);
        b.one(
            id,
            &[
                ("J", json!(j)),
                ("omega_c", json!(params.omega_c)),
                ("n_max", json!(n_max)),
            ],
            1e-8,
            move |tol| {
                let r = action_identity_discrete(&l, &params, n_max)?;
                Ok(Outcome::close(r.value, r.expected, tol + r.tail_bound))
            },
        );
    };
    action(b, "action_identity_discrete".into(), label.j);
    for j in [0.5, 2.5, 6.0] {
        action(b, format!("action_identity_discrete[J={j}]"), j);
    }

    b.one(
        "invert_action_round_trip",
        &[("K1", json!(k1)), ("beta", json!(beta))],
        1e-6,
        move |tol| {
            let target = action_continuous(k1, beta)?;
            Ok(Outcome::close(invert_action(target, beta)?, k1, tol))
        },
    );
}

fn displacement(b: &mut Builder) {
    let dim = b.cfg.truncations.dim;
    let label = b.cfg.label;
    let c = Complex64::new;

    let zs = [c(0.5, 0.0), c(0.0, 0.5), c(0.7, 0.7), c(1.0, 0.0), c(-0.6, 0.8)];
    for z in zs {
        b.one(
            format!("bch[z={}{:+}i]", z.re, z.im),
            &[("re", json!(z.re)), ("im", json!(z.im)), ("dim", json!(dim))],
            1e-9,
            move |tol| Ok(Outcome::bound(bch_check(z, FockSpace::new(dim)?)?, tol)),
        );
    }

    let (z, zp) = (c(0.8, 0.6), c(-0.5, 0.7));
    b.one(
        "two_mode_amplitudes[n+l<=20]",
        &[
            ("z", json!([z.re, z.im])),
            ("zp", json!([zp.re, zp.im])),
            ("dim", json!(dim)),
        ],
        1e-10,
        move |tol| {
            let space = ProductSpace::two_mode(dim, dim)?;
            let v = two_mode_cs(z, zp, &space)?;
            let mut worst: f64 = 0.0;
            for n in 0..=20.min(dim - 1) {
                for l in 0..=(20 - n).min(dim - 1) {
                    worst = worst.max((v[n * dim + l] - two_mode_amplitude(z, zp, n, l)).norm());
                }
            }
            Ok(Outcome::bound(worst, tol))
        },
    );

    b.one(
        "gk_relabel_cross_path",
        &[
            ("J", json!(label.j)),
            ("gamma", json!(label.gamma)),
            ("Jp", json!(label.jp)),
            ("gammap", json!(label.gammap)),
            ("l", json!(label.l)),
            ("dim", json!(dim)),
        ],
        1e-10,
        move |tol| {
            let (z, zp) = gk_relabel(label.j, label.gamma, label.jp, label.gammap)?;
            let space = ProductSpace::two_mode(dim, dim)?;
            let v = two_mode_cs(z, zp, &space)?;
            let n_max = required_n_max(label.j, TAIL_LIMIT).min(dim - 1);
            let cs = build_cs(&label, required_n_max(label.j, TAIL_LIMIT), None)?;
            if label.l >= dim {
                return Err(gklandau::Error::Parameter("l must be below dim".into()));
            }
            let worst = (0..=n_max)
                .map(|n| (v[n * dim + label.l] - cs.discrete.coeffs[n]).norm())
                .fold(0.0, f64::max);
            Ok(Outcome::bound(worst, tol))
        },
    );

    let (z1, z2) = (c(0.3, 0.4), c(-0.5, 0.2));
    b.one(
        "weyl_relation",
        &[
            ("z1", json!([z1.re, z1.im])),
            ("z2", json!([z2.re, z2.im])),
            ("dim", json!(dim)),
        ],
        1e-8,
        move |tol| Ok(Outcome::bound(weyl_relation_defect(z1, z2, FockSpace::new(dim)?)?, tol)),
    );

    let (q, p) = (0.7, -0.4);
    b.one(
        "weyl_heisenberg_qp_form",
        &[("q", json!(q)), ("p", json!(p)), ("dim", json!(dim))],
        1e-10,
        move |tol| {
            let space = FockSpace::new(dim)?;
            let a = weyl_heisenberg_u(q, p, space)?;
            let u2 = DisplacementParams::from_qp(q, p, Mode::FrakB).operator(space)?;
            Ok(Outcome::bound((&a - &u2).max_abs(), tol))
        },
    );

    let w = cis(0.3) * 1.5;
    b.one(
        "displacement_unitarity",
        &[("re", json!(w.re)), ("im", json!(w.im)), ("dim", json!(dim))],
        1e-9,
        move |tol| {
            Ok(Outcome::bound(
                displacement_u(w, FockSpace::new(dim)?)?.unitarity_defect(),
                tol,
            ))
        },
    );

    b.one(
        "infinitesimal_plane_wave",
        &[("points", json!(64)), ("step", json!(0.125)), ("epsilon", json!(0.625))],
        1e-12,
        move |tol| {
            let (n, h) = (64usize, 0.125);
            let alpha = 2.0 * std::f64::consts::PI * 3.0 / (n as f64 * h);
            let v: Vec<Complex64> = (0..n).map(|i| cis(alpha * i as f64 * h)).collect();
            let eps = 5.0 * h;
            let s = infinitesimal_displacement(&v, h, eps)?;
            let phase = cis(-alpha * eps);
            let worst = s
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * phase).norm())
                .fold(0.0, f64::max);
            Ok(Outcome::bound(worst, tol))
        },
    );

    b.one(
        "unitary_operator_cs_norm",
        &[
            ("K", json!(1.5)),
            ("l", json!(2)),
            ("rho_width", json!(1.0)),
            ("dim", json!(dim)),
        ],
        1e-10,
        move |tol| {
            let weights = CsWeights::gaussian(1.0);
            let s = UnitaryOperatorCs::build(
                c(0.6, -0.2),
                c(0.3, 0.4),
                2,
                1.5,
                0.3,
                0.7,
                &weights,
                FockSpace::new(dim)?,
            )?;
            Ok(Outcome::close(s.norm_sqr(), s.expected_norm_sqr(), tol))
        },
    );
}
