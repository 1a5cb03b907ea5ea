//! Seeded samplers for classical parameter manifolds and the matrix-model
//! constructions built on them.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CMat, ModelPoint};
use crate::error::{Error, Result};
use crate::ncpoly::Letter;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The supported parameter manifolds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Manifold {
    /// real unit sphere
    SR,
    /// complex unit sphere
    SC,
    /// `u·p`, `u` a phase and `p` real
    Tsr,
    /// `u(λp, μp)`
    T2sr,
    /// `(x, y)` with `Σ x_i ȳ_i` real
    DotS,
    /// `x = (p+q)/2`, `y = (p−q)/(2i)` up to a phase
    DdotsSub,
    UN,
    ON,
    /// phase times orthogonal
    TON,
    U2N,
    TO2N,
    T2ON,
    /// `z_i = V D_i`, `d×d`
    Udiag { d: usize },
}

impl Manifold {
    pub const NAMES: [&'static str; 13] =
        ["S_R", "S_C", "TSR", "T2SR", "dotS", "ddotS-subfamily", "U_N", "O_N", "TO_N", "U2N", "TO2N", "T2ON", "udiag"];

    pub fn name(self) -> &'static str {
        match self {
            Manifold::SR => "S_R",
            Manifold::SC => "S_C",
            Manifold::Tsr => "TSR",
            Manifold::T2sr => "T2SR",
            Manifold::DotS => "dotS",
            Manifold::DdotsSub => "ddotS-subfamily",
            Manifold::UN => "U_N",
            Manifold::ON => "O_N",
            Manifold::TON => "TO_N",
            Manifold::U2N => "U2N",
            Manifold::TO2N => "TO2N",
            Manifold::T2ON => "T2ON",
            Manifold::Udiag { .. } => "udiag",
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Manifold {
    type Err = Error;

    /// Accepts the names in [`Manifold::NAMES`]; `udiag` takes an optional
    /// size suffix `udiag:3`.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "S_R" | "SR" => Manifold::SR,
            "S_C" | "SC" => Manifold::SC,
            "TSR" => Manifold::Tsr,
            "T2SR" => Manifold::T2sr,
            "dotS" => Manifold::DotS,
            "ddotS-subfamily" | "ddotS" => Manifold::DdotsSub,
            "U_N" | "UN" => Manifold::UN,
            "O_N" | "ON" => Manifold::ON,
            "TO_N" | "TON" => Manifold::TON,
            "U2N" => Manifold::U2N,
            "TO2N" => Manifold::TO2N,
            "T2ON" => Manifold::T2ON,
            "udiag" => Manifold::Udiag { d: 2 },
            _ => match s.strip_prefix("udiag:").and_then(|d| d.parse().ok()) {
                Some(d) if d >= 1 => Manifold::Udiag { d },
                _ => return Err(Error::UnsupportedManifold(s.to_string())),
            },
        })
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(r: &mut ChaCha8Rng) -> f64 {
    r.sample(StandardNormal)
}

fn phase(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, r.gen_range(0.0..2.0 * PI))
}

fn real_unit(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| gauss(r)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn complex_unit(r: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(gauss(r), gauss(r))).collect();
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Haar unitary via QR with diagonal phase correction.
pub fn haar_unitary(n: usize, seed: u64) -> CMat {
    haar_unitary_from(&mut rng(seed), n)
}

fn haar_unitary_from(r: &mut ChaCha8Rng, n: usize) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| Complex64::new(gauss(r), gauss(r)));
    let qr = g.qr();
    let (q, rr) = (qr.q(), qr.r());
    let mut out = q;
    for k in 0..n {
        let d = rr[(k, k)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        for row in 0..n {
            out[(row, k)] *= ph;
        }
    }
    out
}

/// Haar orthogonal via real QR with sign correction.
pub fn haar_orthogonal(n: usize, seed: u64) -> CMat {
    haar_orthogonal_from(&mut rng(seed), n)
}

fn haar_orthogonal_from(r: &mut ChaCha8Rng, n: usize) -> CMat {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| gauss(r));
    let qr = g.qr();
    let (q, rr) = (qr.q(), qr.r());
    CMat::from_fn(n, n, |i, j| c(q[(i, j)] * if rr[(j, j)] < 0.0 { -1.0 } else { 1.0 }))
}

fn column(v: &[Complex64]) -> CMat {
    CMat::from_column_slice(v.len(), 1, v)
}

fn sphere_point(m: Manifold, z: &[Complex64], seed: u64) -> ModelPoint {
    let mut p = ModelPoint::new(m.name(), z.len(), 1, seed);
    for (k, &zi) in z.iter().enumerate() {
        p.insert(Letter::z(k + 1), CMat::from_element(1, 1, zi));
    }
    p.blocks.insert("z".into(), column(z));
    p
}

fn xy_point(m: Manifold, x: &[Complex64], y: &[Complex64], seed: u64) -> ModelPoint {
    let mut p = ModelPoint::new(m.name(), x.len(), 1, seed);
    p.blocks.insert("x".into(), column(x));
    p.blocks.insert("y".into(), column(y));
    p
}

fn group_point(m: Manifold, u: CMat, seed: u64) -> ModelPoint {
    let n = u.nrows();
    let mut p = ModelPoint::new(m.name(), n, 1, seed);
    for i in 0..n {
        for j in 0..n {
            p.insert(Letter::u(i + 1, j + 1), CMat::from_element(1, 1, u[(i, j)]));
        }
    }
    p.blocks.insert("U".into(), u);
    p
}

fn ab_point(m: Manifold, a: CMat, b: CMat, seed: u64) -> ModelPoint {
    let mut p = ModelPoint::new(m.name(), a.nrows(), 1, seed);
    p.blocks.insert("A".into(), a);
    p.blocks.insert("B".into(), b);
    p
}

/// The `(p, q)` point `x = u(p+q)/2`, `y = u(p−q)/(2i)`.
pub fn ddots_from_pq(p: &[f64], q: &[f64], u: Complex64, seed: u64) -> Result<ModelPoint> {
    if p.len() != q.len() || p.is_empty() {
        return Err(Error::Arity(format!("p has {} entries, q has {}", p.len(), q.len())));
    }
    let x: Vec<Complex64> = p.iter().zip(q).map(|(a, b)| u * c((a + b) / 2.0)).collect();
    let y: Vec<Complex64> = p.iter().zip(q).map(|(a, b)| u * c(a - b) / (2.0 * I)).collect();
    let mut pt = xy_point(Manifold::DdotsSub, &x, &y, seed);
    pt.params.insert("phase".into(), u.arg());
    Ok(pt)
}

/// A seeded point of `m` in dimension `n`.
pub fn sample(m: Manifold, n: usize, seed: u64) -> Result<ModelPoint> {
    if n == 0 {
        return Err(Error::Invalid("N must be at least 1".into()));
    }
    let r = &mut rng(seed);
    Ok(match m {
        Manifold::SR => sphere_point(m, &real_unit(r, n).into_iter().map(c).collect::<Vec<_>>(), seed),
        Manifold::SC => sphere_point(m, &complex_unit(r, n), seed),
        Manifold::Tsr => {
            let u = phase(r);
            sphere_point(m, &real_unit(r, n).into_iter().map(|x| u * x).collect::<Vec<_>>(), seed)
        }
        Manifold::T2sr => {
            let u = phase(r);
            let t = r.gen_range(0.0..2.0 * PI);
            let p = real_unit(r, n);
            let x: Vec<_> = p.iter().map(|&pi| u * (t.cos() * pi)).collect();
            let y: Vec<_> = p.iter().map(|&pi| u * (t.sin() * pi)).collect();
            xy_point(m, &x, &y, seed)
        }
        Manifold::DotS => {
            let v = complex_unit(r, 2 * n);
            let (x, mut y) = (v[..n].to_vec(), v[n..].to_vec());
            let s: Complex64 = x.iter().zip(&y).map(|(a, b)| a * b.conj()).sum();
            // multiplying y by e^{iθ} turns Σ x ȳ into e^{-iθ} Σ x ȳ
            let rot = Complex64::from_polar(1.0, s.arg());
            y.iter_mut().for_each(|b| *b *= rot);
            xy_point(m, &x, &y, seed)
        }
        Manifold::DdotsSub => {
            let u = phase(r);
            let (p, q) = (real_unit(r, n), real_unit(r, n));
            let mut pt = ddots_from_pq(&p, &q, u, seed)?;
            pt.seed = seed;
            pt
        }
        Manifold::UN => group_point(m, haar_unitary_from(r, n), seed),
        Manifold::ON => group_point(m, haar_orthogonal_from(r, n), seed),
        Manifold::TON => {
            let u = phase(r);
            group_point(m, haar_orthogonal_from(r, n) * u, seed)
        }
        Manifold::U2N => {
            let v = haar_unitary_from(r, n);
            let w = haar_unitary_from(r, n);
            ab_point(m, (&v + &w) * c(0.5), (&w - &v) * (I * 0.5), seed)
        }
        Manifold::TO2N => {
            let u = phase(r);
            let v = haar_unitary_from(r, n);
            ab_point(m, v.map(|e| u * e.re), v.map(|e| u * e.im), seed)
        }
        Manifold::T2ON => {
            let u = phase(r);
            let t = r.gen_range(0.0..2.0 * PI);
            let o = haar_orthogonal_from(r, n);
            ab_point(m, &o * (u * t.cos()), &o * (u * t.sin()), seed)
        }
        Manifold::Udiag { d } => sample_udiag(n, d, seed),
    })
}

/// `z_i = V D_i` with `V` Haar unitary and real diagonal `D_i`, `Σ D_i² = 1`.
pub fn sample_udiag(n: usize, d: usize, seed: u64) -> ModelPoint {
    let r = &mut rng(seed);
    let v = haar_unitary_from(r, d);
    // one real unit vector per diagonal slot
    let cols: Vec<Vec<f64>> = (0..d).map(|_| real_unit(r, n)).collect();
    let mut p = ModelPoint::new("udiag", n, d, seed);
    for i in 0..n {
        let di = CMat::from_fn(d, d, |a, b| if a == b { c(cols[a][i]) } else { c(0.0) });
        p.insert(Letter::z(i + 1), &v * di);
    }
    p.blocks.insert("V".into(), v);
    p.params.insert("d".into(), d as f64);
    p
}

fn anti_diag(top: Complex64, bottom: Complex64) -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0), top, bottom, c(0.0)])
}

/// `z_i = [[0, x_i + i y_i], [x̄_i + i ȳ_i, 0]]`. Keeps the parameter blocks.
pub fn complex_doubling(pt: &ModelPoint) -> Result<ModelPoint> {
    let (x, y) = match (pt.blocks.get("x"), pt.blocks.get("y")) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::Invalid(format!("complex doubling needs an (x, y) point, got `{}`", pt.manifold))),
    };
    let mut out = ModelPoint::new(format!("cd({})", pt.manifold), pt.n, 2, pt.seed);
    out.params = pt.params.clone();
    out.blocks = pt.blocks.clone();
    for i in 0..pt.n {
        let (xi, yi) = (x[(i, 0)], y[(i, 0)]);
        out.insert(Letter::z(i + 1), anti_diag(xi + I * yi, xi.conj() + I * yi.conj()));
    }
    Ok(out)
}

/// `z_i' = [[0, z_i], [z_i*, 0]]`, self-adjoint of twice the size.
pub fn doubling(pt: &ModelPoint) -> Result<ModelPoint> {
    let d = pt.dim;
    let mut out = ModelPoint::new(format!("double({})", pt.manifold), pt.n, 2 * d, pt.seed);
    out.params = pt.params.clone();
    for i in 1..=pt.n {
        let z = pt.matrix(Letter::z(i))?;
        let mut m = CMat::zeros(2 * d, 2 * d);
        m.view_mut((0, d), (d, d)).copy_from(&z);
        m.view_mut((d, 0), (d, d)).copy_from(&z.adjoint());
        out.insert(Letter::z(i), m);
    }
    Ok(out)
}

/// `u_ij = [[0, a_ij + i b_ij], [ā_ij + i b̄_ij, 0]]` from an `(A, B)` point.
pub fn group_model(pt: &ModelPoint) -> Result<ModelPoint> {
    let (a, b) = match (pt.blocks.get("A"), pt.blocks.get("B")) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Invalid(format!("group model needs an (A, B) point, got `{}`", pt.manifold))),
    };
    let n = a.nrows();
    let mut out = ModelPoint::new(format!("gm({})", pt.manifold), n, 2, pt.seed);
    out.blocks = pt.blocks.clone();
    for i in 0..n {
        for j in 0..n {
            let (aij, bij) = (a[(i, j)], b[(i, j)]);
            out.insert(Letter::u(i + 1, j + 1), anti_diag(aij + I * bij, aij.conj() + I * bij.conj()));
        }
    }
    Ok(out)
}

/// Named fixed points, already in matrix-model form.
pub const PRESETS: [&str; 3] = ["circ-witness", "pq", "scalar-1i"];

/// Older names still accepted on input, with their canonical preset.
pub const PRESET_ALIASES: [(&str, &str); 1] = [("prop25", "circ-witness")];

/// The canonical name of a preset or alias.
pub fn canonical_preset(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .copied()
        .find(|p| *p == name)
        .or_else(|| PRESET_ALIASES.iter().find(|(a, _)| *a == name).map(|(_, p)| *p))
}

/// A named preset at `N ≥ 2`, padded by zero coordinates beyond the second.
pub fn preset(name: &str, n: usize) -> Result<ModelPoint> {
    if n < 2 {
        return Err(Error::Invalid(format!("preset `{name}` needs N ≥ 2")));
    }
    let pad = |v: [Complex64; 2]| {
        let mut out = vec![c(0.0); n];
        out[..2].copy_from_slice(&v);
        out
    };
    let name = canonical_preset(name).unwrap_or(name);
    let mut pt = match name {
        "circ-witness" => {
            let x = pad([I * FRAC_1_SQRT_2, c(0.0)]);
            let y = pad([c(0.0), c(FRAC_1_SQRT_2)]);
            complex_doubling(&xy_point(Manifold::DdotsSub, &x, &y, 0))?
        }
        "pq" => {
            let (mut p, mut q) = (vec![0.0; n], vec![0.0; n]);
            p[0] = 1.0;
            q[1] = 1.0;
            complex_doubling(&ddots_from_pq(&p, &q, c(1.0), 0)?)?
        }
        "scalar-1i" => sphere_point(Manifold::SC, &pad([c(FRAC_1_SQRT_2), I * FRAC_1_SQRT_2]), 0),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    pt.manifold = format!("preset:{name}");
    pt.params.insert("padding".into(), (n - 2) as f64);
    Ok(pt)
}

fn col(pt: &ModelPoint, name: &str) -> Result<Vec<Complex64>> {
    Ok(pt.block(name)?.iter().cloned().collect())
}

fn unit_defect(parts: &[&[Complex64]]) -> f64 {
    (parts.iter().flat_map(|v| v.iter()).map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs()
}

fn unitary_defect(u: &CMat) -> f64 {
    let n = u.nrows();
    let id = CMat::identity(n, n);
    let a = (u * u.adjoint() - &id).norm();
    let b = (u.transpose() * u.conjugate() - &id).norm();
    a.max(b)
}

/// Largest violation of `a_ij ā_kl + b_ij b̄_kl ∈ ℝ` and
/// `a_ij b̄_kl − b_ij ā_kl ∈ iℝ`.
pub(crate) fn un_prime_defect(a: &CMat, b: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        for (z, w) in a.iter().zip(b.iter()) {
            worst = worst.max((x * z.conj() + y * w.conj()).im.abs());
            worst = worst.max((x * w.conj() - y * z.conj()).re.abs());
        }
    }
    worst
}

/// Distance of `A`, `B` from a common phase times real matrices.
pub(crate) fn common_phase_defect(a: &CMat, b: &CMat) -> f64 {
    let big = a.iter().chain(b.iter()).cloned().fold(c(0.0), |m, e| if e.norm() > m.norm() { e } else { m });
    if big.norm() == 0.0 {
        return 0.0;
    }
    let ph = big / big.norm();
    a.iter().chain(b.iter()).map(|e| (e * ph.conj()).im.abs()).fold(0.0, f64::max)
}

fn pair_defect(x: &[Complex64], y: &[Complex64], f: impl Fn(Complex64, Complex64) -> f64) -> f64 {
    let mut worst = 0.0f64;
    for &a in x {
        for &b in y {
            worst = worst.max(f(a, b));
        }
    }
    worst
}

fn indexed_pair_defect(x: &[Complex64], y: &[Complex64], f: impl Fn(usize, usize) -> f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        for j in 0..y.len() {
            worst = worst.max(f(i, j));
        }
    }
    worst
}

/// How far a point is from satisfying the defining equations of `m`.
pub fn defining_residual(m: Manifold, pt: &ModelPoint) -> Result<f64> {
    let tsr_defect = |z: &[Complex64]| pair_defect(z, z, |a, b| (a * b.conj()).im.abs() * 2.0);
    Ok(match m {
        Manifold::SR => {
            let z = pt.scalars()?;
            unit_defect(&[&z]).max(z.iter().map(|v| v.im.abs()).fold(0.0, f64::max))
        }
        Manifold::SC => unit_defect(&[&pt.scalars()?]),
        Manifold::Tsr => {
            let z = pt.scalars()?;
            unit_defect(&[&z]).max(tsr_defect(&z))
        }
        Manifold::T2sr => {
            let (x, y) = (col(pt, "x")?, col(pt, "y")?);
            let mixed = indexed_pair_defect(&x, &y, |i, j| (x[i] * y[j].conj() - y[i] * x[j].conj()).norm());
            let real = |u: &[Complex64], v: &[Complex64]| pair_defect(u, v, |a, b| (a * b.conj()).im.abs());
            unit_defect(&[&x, &y]).max(mixed).max(real(&x, &x)).max(real(&y, &y)).max(real(&x, &y))
        }
        Manifold::DotS | Manifold::DdotsSub => {
            let (x, y) = (col(pt, "x")?, col(pt, "y")?);
            let s: Complex64 = x.iter().zip(&y).map(|(a, b)| a * b.conj()).sum();
            let mut worst = unit_defect(&[&x, &y]).max(s.im.abs());
            if m == Manifold::DdotsSub {
                worst = worst.max(indexed_pair_defect(&x, &y, |i, j| {
                    let r = (x[i] * x[j].conj() + y[i] * y[j].conj()).im.abs();
                    let s = (x[i] * y[j].conj() - y[i] * x[j].conj()).re.abs();
                    r.max(s)
                }));
            }
            worst
        }
        Manifold::UN => unitary_defect(pt.block("U")?),
        Manifold::ON => {
            let u = pt.block("U")?;
            unitary_defect(u).max(u.iter().map(|e| e.im.abs()).fold(0.0, f64::max))
        }
        Manifold::TON => {
            let u = pt.block("U")?;
            let v: Vec<Complex64> = u.iter().cloned().collect();
            unitary_defect(u).max(pair_defect(&v, &v, |a, b| (a * b.conj()).im.abs()))
        }
        Manifold::U2N | Manifold::TO2N | Manifold::T2ON => {
            let (a, b) = (pt.block("A")?, pt.block("B")?);
            let v = a + b * I;
            let w = a - b * I;
            let base = unitary_defect(&v).max(unitary_defect(&w));
            match m {
                Manifold::TO2N => base.max(common_phase_defect(a, b)),
                Manifold::T2ON => base.max(un_prime_defect(a, b)),
                _ => base,
            }
        }
        Manifold::Udiag { .. } => {
            let d = pt.dim;
            let v = pt.block("V")?;
            let id = CMat::identity(d, d);
            let mut s1 = CMat::zeros(d, d);
            let mut s2 = CMat::zeros(d, d);
            let mut diag = 0.0f64;
            for i in 1..=pt.n {
                let z = pt.matrix(Letter::z(i))?;
                s1 += &z * z.adjoint();
                s2 += z.adjoint() * &z;
                let di = v.adjoint() * &z;
                for a in 0..d {
                    for b in 0..d {
                        let e = di[(a, b)];
                        diag = diag.max(if a == b { e.im.abs() } else { e.norm() });
                    }
                }
            }
            (s1 - &id).norm().max((s2 - id).norm()).max(diag).max(unitary_defect(v))
        }
    })
}

/// Classical membership of a scalar point.
pub fn membership(m: Manifold, pt: &ModelPoint, tol: f64) -> Result<bool> {
    if !pt.is_scalar() {
        return Err(Error::Dimension(format!("membership needs a scalar point, got dim {}", pt.dim)));
    }
    match m {
        Manifold::SR | Manifold::SC | Manifold::Tsr => Ok(defining_residual(m, pt)? <= tol),
        Manifold::UN | Manifold::ON | Manifold::TON => {
            let n = pt.n;
            let u = CMat::from_fn(n, n, |i, j| {
                pt.matrices.get(&Letter::u(i + 1, j + 1)).map(|m| m[(0, 0)]).unwrap_or(c(f64::NAN))
            });
            let mut q = pt.clone();
            q.blocks.insert("U".into(), u);
            Ok(defining_residual(m, &q)? <= tol)
        }
        _ => Err(Error::UnsupportedManifold(format!("no scalar membership test for {m}"))),
    }
}
