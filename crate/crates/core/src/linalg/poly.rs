//! Univariate polynomials over ℚ(i) and exact root extraction.
//!
//! Roots are located numerically on the squarefree part, snapped to nearby
//! Gaussian rationals and then accepted only if they are exact roots. A
//! polynomial that does not split over ℚ(i) is reported, never approximated.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;
use super::scalar::Scalar;
use super::LinalgError;

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Scalar::ONE] }
    }

    /// x − r
    pub fn linear(r: &Scalar) -> Self {
        Poly::new(vec![-r, Scalar::ONE])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or(Scalar::ZERO)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        Poly { coeffs: self.coeffs.iter().map(|c| c * &l).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![Scalar::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn conj(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::int(k as i64)).collect(),
        )
    }

    /// Euclidean division: (quotient, remainder).
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::new(vec![]), self.clone());
        }
        let inv = d.lead().recip();
        let mut q = vec![Scalar::ZERO; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    r[k + j] -= &t;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        let g = self.gcd(other);
        self.mul(other).div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| Complex64::new(c.re.to_f64(), c.im.to_f64())).collect()
    }

    /// Lowest common denominator of all rational parts.
    fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(&c.re.denom_big());
            l = l.lcm(&c.im.denom_big());
        }
        l
    }

    /// Distinct roots, requiring complete splitting over ℚ(i).
    pub fn roots(&self) -> Result<Vec<Scalar>, LinalgError> {
        let Some(deg) = self.degree() else {
            return Err(LinalgError::DoesNotSplit("zero polynomial".into()));
        };
        if deg == 0 {
            return Ok(Vec::new());
        }
        let sf = self.squarefree_part();
        let mut rest = sf.clone();
        let mut found: Vec<Scalar> = Vec::new();
        // zero roots first; they are exact and make the rest better conditioned
        if rest.coeffs[0].is_zero() {
            found.push(Scalar::ZERO);
            rest = rest.div_rem(&Poly::linear(&Scalar::ZERO)).0;
        }
        if rest.degree().unwrap_or(0) > 0 {
            let scale = rest.monic().denominator_lcm();
            for z in durand_kerner(&rest.monic().to_complex()) {
                if rest.degree() == Some(0) {
                    break;
                }
                for cand in snap_candidates(z, &scale) {
                    if rest.eval(&cand).is_zero() {
                        rest = rest.div_rem(&Poly::linear(&cand)).0;
                        found.push(cand);
                        break;
                    }
                }
            }
        }
        if rest.degree() != Some(0) {
            return Err(LinalgError::DoesNotSplit(format!("{}", PolyDisplay(self))));
        }
        found.sort();
        Ok(found)
    }
}

struct PolyDisplay<'a>(&'a Poly);

impl std::fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .0
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c);
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(4.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

/// Gaussian rationals near z: the lattice point with the polynomial's
/// denominator, then continued-fraction approximants of each part.
fn snap_candidates(z: Complex64, scale: &BigInt) -> Vec<Scalar> {
    let mut out = Vec::new();
    if let Some(s) = scale.to_f64().filter(|s| *s < 1e9) {
        let re = (z.re * s).round();
        let im = (z.im * s).round();
        if re.abs() < 9e15 && im.abs() < 9e15 {
            let den = scale.clone();
            out.push(Scalar::new(
                Rational::from_bigints(BigInt::from(re as i64), den.clone()),
                Rational::from_bigints(BigInt::from(im as i64), den),
            ));
        }
    }
    let res = continued_fraction_approximants(z.re);
    let ims = continued_fraction_approximants(z.im);
    for r in res.iter().take(8) {
        for i in ims.iter().take(8) {
            out.push(Scalar::new(r.clone(), i.clone()));
        }
    }
    out
}

fn continued_fraction_approximants(x: f64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    if x.abs() < 1e-9 {
        out.push(Rational::ZERO);
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x;
    for _ in 0..12 {
        let a = y.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ab = BigInt::from(a as i64);
        let h2 = &ab * &h1 + &h0;
        let k2 = &ab * &k1 + &k0;
        if k2.is_positive() {
            out.push(Rational::from_bigints(h2.clone(), k2.clone()));
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    out
}
