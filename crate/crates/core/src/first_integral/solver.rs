use num_traits::{One, Zero};

use super::lie::circle_average;
use super::{FirstIntegralOutcome, FocalMethod, FocalValueSequence, Obstruction, Status};
use crate::algebra::linsolve::{ImageBasis, SparseVec};
use crate::algebra::{check_order, MultiIndex, QSeries, Rational};
use crate::error::{Error, Result};
use crate::exterior::{exterior_derivative_of, QForm};

type Key = (usize, MultiIndex);

fn int(v: usize) -> Rational {
    Rational::from_integer((v as i64).into())
}

/// Degree-`m` coefficients of a 1-form as a sparse vector.
fn to_sparse(w: &QForm, m: usize) -> SparseVec<Key, Rational> {
    let mut out = Vec::new();
    for i in 0..w.nvars() {
        for (mon, c) in w.component(i).bucket(m) {
            out.push(((i, *mon), c.clone()));
        }
    }
    out.sort_by_key(|a| a.0);
    out
}

fn from_sparse(nvars: usize, order: usize, entries: &[(Key, Rational)]) -> QForm {
    let mut comps: Vec<Vec<(MultiIndex, Rational)>> = vec![Vec::new(); nvars];
    for ((i, mon), c) in entries {
        comps[*i].push((*mon, c.clone()));
    }
    let comps = comps
        .into_iter()
        .map(|t| QSeries::from_terms(nvars, order, t))
        .collect();
    QForm::one_form(comps).expect("components share a dimension")
}

/// Returns `ν` after checking that the leading part of `ω` is `dQ`.
fn check_leading(omega: &QForm, q: &QSeries) -> Result<usize> {
    let deg = q
        .homogeneous_degree()
        .ok_or_else(|| Error::Precondition("Q must be homogeneous and nonzero".into()))?;
    if deg < 2 {
        return Err(Error::Precondition("Q must have degree at least 2".into()));
    }
    if omega.degree() != 1 || q.nvars() != omega.nvars() {
        return Err(Error::Precondition("ω must be a 1-form in the variables of Q".into()));
    }
    let nu = deg - 1;
    let lead = omega.valuation().ok_or(Error::ZeroForm)?;
    let dq = exterior_derivative_of(q);
    let matches = lead == nu
        && (0..omega.nvars()).all(|i| omega.component(i).bucket(nu) == dq.component(i).bucket(nu));
    if !matches {
        return Err(Error::Precondition(format!(
            "leading part of ω (degree {lead}) is not dQ (degree {nu})"
        )));
    }
    Ok(nu)
}

/// Degree-by-degree state shared by the solver and the focal-value driver.
struct Stages<'a> {
    omega: &'a QForm,
    q: QSeries,
    dq: Vec<QSeries>,
    nu: usize,
    n: usize,
    order: usize,
    /// Homogeneous parts `f_k`, order `N + 1`.
    f: Vec<QSeries>,
    /// Their differentials, order `N`.
    df: Vec<QForm>,
    /// Homogeneous parts `g_j`, order `N`.
    g: Vec<QSeries>,
}

impl<'a> Stages<'a> {
    fn new(omega: &'a QForm, q: &QSeries, nu: usize, order: usize) -> Self {
        let n = omega.nvars();
        let q = q.with_order(order + 1);
        let dq = (0..n).map(|i| q.partial(i).expect("index in range")).collect();
        let mut f = vec![QSeries::zero(n, order + 1); order + 2];
        f[nu + 1] = q.clone();
        let mut df = vec![QForm::zero(1, n, order); order + 2];
        df[nu + 1] = exterior_derivative_of(&q);
        let mut g = vec![QSeries::zero(n, order); order + 1];
        g[0] = QSeries::one(n, order);
        Self { omega, q, dq, nu, n, order, f, df, g }
    }

    /// Solves stage `m` as far as possible and returns the normal form of the
    /// part that lies outside the stage image.
    fn run(&mut self, m: usize) -> Result<SparseVec<Key, Rational>> {
        let (n, nu, order) = (self.n, self.nu, self.order);
        let e = m - nu;
        let mut eta = self.omega.homogeneous_part(m).with_order(order);
        for j in 1..e {
            if self.g[j].is_zero() {
                continue;
            }
            let k = m + 1 - j;
            eta = eta.try_sub(&self.df[k].mul_function(&self.g[j])?)?;
        }
        let eta = eta.homogeneous_part(m);
        let ieta = eta.euler_contract()?.as_function().homogeneous_part(m + 1);
        let inv = int(m + 1).recip();
        let target = eta.try_sub(&exterior_derivative_of(&ieta).scale(&inv))?;

        // Column of g-monomial μ: μ·dQ − κ·d(μQ) with κ = (ν+1)/(m+1),
        // i.e. component i is (1−κ)·μ·∂_iQ − κ·∂_iμ·Q.
        let kappa = int(nu + 1) * &inv;
        let one_minus = Rational::one() - &kappa;
        let monomials = MultiIndex::all_of_degree(n, e as u32);
        let mut basis: ImageBasis<Key, Rational> = ImageBasis::new();
        for (idx, mu) in monomials.iter().enumerate() {
            let mut col = Vec::new();
            for i in 0..n {
                let a = self.dq[i].mul_monomial(mu, &one_minus);
                let comp = match mu.lower(i) {
                    Some(low) => {
                        let b = self.q.mul_monomial(&low, &(-(kappa.clone() * int(mu.get(i) as usize))));
                        a.try_add(&b)?
                    }
                    None => a,
                };
                col.extend(comp.bucket(m).iter().map(|(mon, c)| ((i, *mon), c.clone())));
            }
            basis.push_column(idx, col);
        }
        let red = basis.reduce(to_sparse(&target, m));

        let ge = QSeries::from_terms(
            n,
            order,
            red.solution.iter().map(|(&idx, c)| (monomials[idx], c.clone())),
        );
        let gq = ge.with_order(order + 1).try_mul(&self.q)?.homogeneous_part(m + 1);
        let fm = ieta
            .with_order(order + 1)
            .try_sub(&gq.scale(&int(nu + 1)))?
            .scale(&inv);
        self.df[m + 1] = exterior_derivative_of(&fm);
        self.f[m + 1] = fm;
        self.g[e] = ge;
        Ok(red.normal_form)
    }

    /// `f` through degree `top + 1` and `g` through degree `top − ν`.
    fn assemble(&self, top: usize) -> (QSeries, QSeries) {
        let n = self.n;
        let mut f = QSeries::zero(n, top + 1);
        for k in self.nu + 1..=top + 1 {
            f = f.try_add(&self.f[k].truncated(top + 1)).expect("same dimension");
        }
        let gtop = top - self.nu;
        let mut g = QSeries::zero(n, gtop);
        for j in 0..=gtop {
            g = g.try_add(&self.g[j].truncated(gtop)).expect("same dimension");
        }
        (f, g)
    }
}

/// `ω − g·df` through order `N`, recomputed from the assembled series.
fn residual(omega: &QForm, f: &QSeries, g: &QSeries, order: usize) -> Result<QForm> {
    let df = exterior_derivative_of(&f.with_order(order + 1));
    omega
        .truncated(order)
        .try_sub(&df.mul_function(&g.with_order(order))?)
}

/// Solves `ω = g·df` with `f = Q + …`, `g = 1 + …` through order `N`.
///
/// Stages run for `m = ν+1 … N` and stop at the first inconsistent one. Free
/// unknowns of each stage are set to zero.
pub fn solve_gdf(omega: &QForm, q: &QSeries, order: usize) -> Result<FirstIntegralOutcome> {
    check_order(order)?;
    let nu = check_leading(omega, q)?;
    if order > omega.order() {
        return Err(Error::Precondition(format!(
            "ω is known through order {} only, {} requested",
            omega.order(),
            order
        )));
    }
    if order < nu {
        return Err(Error::Precondition("order below the leading degree".into()));
    }
    let integrability = omega.truncated(order).integrability_residual()?;
    if !integrability.is_zero() {
        return Err(Error::NotIntegrable { nonzero: integrability.num_terms() });
    }

    let mut stages = Stages::new(omega, q, nu, order);
    for m in nu + 1..=order {
        let nf = stages.run(m)?;
        if !nf.is_empty() {
            let (f, g) = stages.assemble(m - 1);
            let residual = from_sparse(stages.n, order, &nf);
            let focal_values = nf.into_iter().map(|(_, c)| c).collect();
            return Ok(FirstIntegralOutcome {
                status: Status::Obstructed,
                f,
                g,
                obstruction: Some(Obstruction { degree: m, residual, focal_values }),
                residual_is_zero: false,
                order,
            });
        }
    }
    let (f, g) = stages.assemble(order);
    let residual_is_zero = residual(omega, &f, &g, order)?.is_zero();
    Ok(FirstIntegralOutcome {
        status: if residual_is_zero { Status::Solved } else { Status::Obstructed },
        f,
        g,
        obstruction: None,
        residual_is_zero,
        order,
    })
}

/// Focal values `V_4, V_6, …` of a planar form with leading part `d(x²+y²)`.
///
/// Each odd stage leaves a one-dimensional class; its value is the average of
/// the residual over the unit circle, `(1/2π)∮ r`. Stages continue past a
/// nonzero value by keeping the partial solution, so later values are defined
/// modulo the earlier ones.
pub fn focal_values_from_obstructions(omega: &QForm, order: usize) -> Result<FocalValueSequence> {
    check_order(order)?;
    if omega.nvars() != 2 {
        return Err(Error::Precondition("focal values need a planar form".into()));
    }
    let x = QSeries::var(2, 0, order + 1);
    let y = QSeries::var(2, 1, order + 1);
    let q = &(&x * &x) + &(&y * &y);
    let nu = check_leading(omega, &q)?;
    if order > omega.order() {
        return Err(Error::Precondition("order exceeds the order of ω".into()));
    }
    let mut stages = Stages::new(omega, &q, nu, order);
    let mut raw = Vec::new();
    for m in nu + 1..=order {
        let nf = stages.run(m)?;
        if (m + 1) % 2 == 0 {
            let r = from_sparse(2, order, &nf);
            let (a, b) = (r.component(0), r.component(1));
            // On the circle dx = −y dθ and dy = x dθ.
            let integrand = b.try_mul(&x.with_order(order))?.try_sub(&a.try_mul(&y.with_order(order))?)?;
            raw.push((m + 1, circle_average(&integrand.with_order(order + 1), m + 1)));
        }
    }
    Ok(FocalValueSequence::new(FocalMethod::SolverObstruction, raw))
}

/// Reparametrizes a solved pair so that `f` matches a reference first
/// integral `h`: finds `φ(t) = t + Σ c_k t^k` with `φ(f) = h` and returns
/// `(φ(f), g / φ'(f))`. Fails when `h` is not a function of `f`.
pub fn align_gauge(f: &QSeries, g: &QSeries, h: &QSeries) -> Result<(QSeries, QSeries)> {
    let top = f.order().min(h.order());
    let p = f.valuation().ok_or(Error::ZeroForm)?;
    let lead = f.homogeneous_part(p);
    if h.homogeneous_part(p).truncated(top) != lead.truncated(top) || h.valuation() != Some(p) {
        return Err(Error::Precondition("reference has a different leading part".into()));
    }
    let f = f.truncated(top);
    let mut composed = f.clone();
    let mut derivative = QSeries::one(f.nvars(), top);
    let mut powers = vec![QSeries::one(f.nvars(), top), f.clone()];
    loop {
        let diff = h.truncated(top).try_sub(&composed)?;
        let Some(deg) = diff.valuation() else { break };
        if deg % p != 0 {
            return Err(Error::Precondition("reference is not a function of f".into()));
        }
        let k = deg / p;
        while powers.len() <= k {
            let next = powers.last().expect("nonempty").try_mul(&f)?;
            powers.push(next);
        }
        let lead_k = powers[k].homogeneous_part(deg);
        let (mon, c) = diff.bucket(deg)[0].clone();
        let base = lead_k.coeff(&mon);
        if base.is_zero() {
            return Err(Error::Precondition("reference is not a function of f".into()));
        }
        let ck = c / base;
        if diff.homogeneous_part(deg) != lead_k.scale(&ck) {
            return Err(Error::Precondition("reference is not a function of f".into()));
        }
        composed = composed.try_add(&powers[k].scale(&ck))?;
        derivative = derivative.try_add(&powers[k - 1].scale(&(ck * int(k))))?;
    }
    let gtop = g.order().min(top);
    let scale = derivative.truncated(gtop).try_reciprocal()?;
    let g = g.truncated(gtop).try_mul(&scale)?;
    Ok((composed, g))
}
