use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

use super::{commutator, FockSpace, ModelParams, OperatorMatrix, ProductSpace};

/// `(lower, raise)` with `<n-1|lower|n> = scale sqrt(n)` and
/// `raise = lower^dagger`.
pub fn ladder<T: Real>(space: FockSpace, scale: T) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>)> {
    if !(scale > T::zero()) || !scale.finite() {
        return Err(Error::param("ladder scale must be positive and finite"));
    }
    let n = space.dim();
    let lower = DMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            C::new(scale * T::nat(j).sqrt(), T::zero())
        } else {
            C::new(T::zero(), T::zero())
        }
    });
    let raise = lower.adjoint();
    Ok((OperatorMatrix::new(space, lower)?, OperatorMatrix::new(space, raise)?))
}

/// The four independent ladders `b`, `frak d`, `frak l`, `k` behind the
/// quadratures `(Q1, P1)`, `(Q~1, P~1)`, `(Q2, P2)`, `(Q~2, P~2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ladder {
    B,
    FrakD,
    FrakL,
    K,
}

impl Ladder {
    pub const ALL: [Ladder; 4] = [Ladder::B, Ladder::FrakD, Ladder::FrakL, Ladder::K];

    fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureMode {
    Q1P1,
    TildeQ1P1,
    Q2P2,
    TildeQ2P2,
}

impl QuadratureMode {
    pub fn ladder(self) -> Ladder {
        match self {
            QuadratureMode::Q1P1 => Ladder::B,
            QuadratureMode::TildeQ1P1 => Ladder::FrakD,
            QuadratureMode::Q2P2 => Ladder::FrakL,
            QuadratureMode::TildeQ2P2 => Ladder::K,
        }
    }
}

/// `Q = (lower + raise)/sqrt 2`, `P = i (raise - lower)/sqrt 2` for a ladder
/// with `[a, a^dagger] = 2 M omega_c` (the helicity section works at
/// `hbar = 1`, so `params.hbar` is not used here).
///
/// Every mode has the same single-mode matrices; `which` only records the
/// ladder they belong to when embedded.
pub fn quadratures<T: Real>(
    space: FockSpace,
    params: &ModelParams<T>,
    which: QuadratureMode,
) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>)> {
    let _ = which;
    let scale = (T::lit(2.0) * params.mass * params.omega_c).sqrt();
    let (l, r) = ladder(space, scale)?;
    let h = T::FRAC_1_SQRT_2();
    let q = (&l + &r).scale_real(h).checked_hermitian()?;
    let p = (&r - &l).scale(C::new(T::zero(), h)).checked_hermitian()?;
    Ok((q, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HelicityOp {
    APlus,
    APlusStar,
    AMinus,
    AMinusStar,
    TildeAPlus,
    TildeAPlusStar,
    TildeAMinus,
    TildeAMinusStar,
}

impl HelicityOp {
    pub const ALL: [HelicityOp; 8] = [
        HelicityOp::APlus,
        HelicityOp::APlusStar,
        HelicityOp::AMinus,
        HelicityOp::AMinusStar,
        HelicityOp::TildeAPlus,
        HelicityOp::TildeAPlusStar,
        HelicityOp::TildeAMinus,
        HelicityOp::TildeAMinusStar,
    ];

    pub fn ladder(self) -> Ladder {
        match self {
            HelicityOp::APlus | HelicityOp::APlusStar => Ladder::B,
            HelicityOp::AMinus | HelicityOp::AMinusStar => Ladder::FrakD,
            HelicityOp::TildeAPlus | HelicityOp::TildeAPlusStar => Ladder::FrakL,
            HelicityOp::TildeAMinus | HelicityOp::TildeAMinusStar => Ladder::K,
        }
    }

    pub fn is_creation(self) -> bool {
        matches!(
            self,
            HelicityOp::APlusStar | HelicityOp::AMinusStar | HelicityOp::TildeAPlusStar | HelicityOp::TildeAMinusStar
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            HelicityOp::APlus => "A+",
            HelicityOp::APlusStar => "A+*",
            HelicityOp::AMinus => "A-",
            HelicityOp::AMinusStar => "A-*",
            HelicityOp::TildeAPlus => "A~+",
            HelicityOp::TildeAPlusStar => "A~+*",
            HelicityOp::TildeAMinus => "A~-",
            HelicityOp::TildeAMinusStar => "A~-*",
        }
    }

    /// Canonical value of `[self, other]` in units of the identity.
    pub fn expected_commutator(self, other: HelicityOp) -> i32 {
        if self.ladder() != other.ladder() || self.is_creation() == other.is_creation() {
            0
        } else if self.is_creation() {
            -2
        } else {
            2
        }
    }
}

/// Helicity quadratures `Q+-, P+-, Q~+-, P~+-` and the eight helicity
/// ladder operators, each stored on one mode.
///
/// `A+` and `A~+` are built from `(Q, P)` as `(Q + iP)/sqrt 2`; `A-` and
/// `A~-` as `(iQ - P)/sqrt 2`. Each pair belongs to a different ladder, so
/// operators from different pairs only meet on a product space
/// ([`HelicityOps::sector`], [`HelicityOps::four_mode`]).
#[derive(Debug, Clone)]
pub struct HelicityOps<T: Real> {
    space: FockSpace,
    q: [OperatorMatrix<T>; 4],
    p: [OperatorMatrix<T>; 4],
    ops: Vec<OperatorMatrix<T>>,
}

pub fn helicity_ops<T: Real>(space: FockSpace, params: &ModelParams<T>) -> Result<HelicityOps<T>> {
    let norm = T::one() / (params.mass * params.omega_c).sqrt();
    let modes = [
        QuadratureMode::Q1P1,
        QuadratureMode::TildeQ1P1,
        QuadratureMode::Q2P2,
        QuadratureMode::TildeQ2P2,
    ];
    let mut qs = Vec::with_capacity(4);
    let mut ps = Vec::with_capacity(4);
    for m in modes {
        let (q, p) = quadratures(space, params, m)?;
        qs.push(q.scale_real(norm));
        ps.push(p.scale_real(norm));
    }
    let h = T::FRAC_1_SQRT_2();
    let i = C::new(T::zero(), T::one());
    let one = C::new(T::one(), T::zero());
    // (coefficient of Q, coefficient of P) for annihilator and creator
    let plus = ((one, i), (one, -i));
    let minus = ((i, -one), (-i, -one));
    let mut ops = Vec::with_capacity(8);
    for (slot, form) in [(0, plus), (1, minus), (2, plus), (3, minus)] {
        for (cq, cp) in [form.0, form.1] {
            let op = &qs[slot].scale(cq * h) + &ps[slot].scale(cp * h);
            ops.push(op);
        }
    }
    // pushed in HelicityOp::ALL order: ladders B, FrakD, FrakL, K
    let q: [OperatorMatrix<T>; 4] = qs.try_into().map_err(|_| Error::numeric("quadrature count"))?;
    let p: [OperatorMatrix<T>; 4] = ps.try_into().map_err(|_| Error::numeric("quadrature count"))?;
    Ok(HelicityOps { space, q, p, ops })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorDefect<T> {
    pub left: HelicityOp,
    pub right: HelicityOp,
    pub expected: i32,
    /// Interior-block max deviation from `expected * I`.
    pub defect: T,
}

impl<T: Real> HelicityOps<T> {
    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn get(&self, op: HelicityOp) -> &OperatorMatrix<T> {
        &self.ops[op as usize]
    }

    /// Helicity position quadrature of a ladder: `Q+` (b), `Q-` (frak d),
    /// `Q~+` (frak l), `Q~-` (k).
    pub fn q(&self, ladder: Ladder) -> &OperatorMatrix<T> {
        &self.q[ladder.slot()]
    }

    pub fn p(&self, ladder: Ladder) -> &OperatorMatrix<T> {
        &self.p[ladder.slot()]
    }

    /// Both operators on the smallest space holding them: one mode when they
    /// share a ladder, otherwise the two-mode product with `x` first.
    pub fn sector(&self, x: HelicityOp, y: HelicityOp) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>)> {
        if x.ladder() == y.ladder() {
            return Ok((self.get(x).clone(), self.get(y).clone()));
        }
        let s2 = ProductSpace::new(vec![self.space, self.space])?;
        Ok((self.get(x).embed(&s2, 0)?, self.get(y).embed(&s2, 1)?))
    }

    /// Embeds an operator into the four-mode space ordered `b, frak d,
    /// frak l, k`. Dimension grows as `N^4`; intended for small `N`.
    pub fn four_mode(&self, op: HelicityOp) -> Result<OperatorMatrix<T>> {
        let s4 = ProductSpace::new(vec![self.space; 4])?;
        self.get(op).embed(&s4, op.ladder().slot())
    }

    /// Embeds a one-mode operator at a ladder slot of the four-mode space.
    pub fn four_mode_embed(&self, m: &OperatorMatrix<T>, ladder: Ladder) -> Result<OperatorMatrix<T>> {
        let s4 = ProductSpace::new(vec![self.space; 4])?;
        m.embed(&s4, ladder.slot())
    }

    /// All 64 ordered commutators, evaluated on their sector and compared
    /// with `+-2` or `0` on the interior block.
    pub fn commutator_defects(&self) -> Result<Vec<CommutatorDefect<T>>> {
        let mut out = Vec::with_capacity(64);
        for x in HelicityOp::ALL {
            for y in HelicityOp::ALL {
                let (a, b) = self.sector(x, y)?;
                let c = commutator(&a, &b)?;
                let expected = x.expected_commutator(y);
                let shift = OperatorMatrix::identity(c.space().clone()).scale_real(T::lit(f64::from(expected)));
                let defect = (&c - &shift).interior_max_abs();
                out.push(CommutatorDefect {
                    left: x,
                    right: y,
                    expected,
                    defect,
                });
            }
        }
        Ok(out)
    }
}
