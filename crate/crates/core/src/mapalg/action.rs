//! Finite abelian group actions on g⊗B and their fixed points.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartan::SuperAlgebra;
use crate::coeffalg::FinDimCommAlgebra;
use crate::linalg::{Matrix, Scalar, SparseVec, Subspace, Tracked};

use super::{scalar_root_of_unity, MapError, MapSuperAlgebra};

/// One cyclic factor of T: a generator acting on g and on B.
#[derive(Clone, Debug)]
pub struct Generator {
    pub order: usize,
    pub g: Matrix,
    pub b: Matrix,
}

/// T = ℤ/o₁ × ⋯ × ℤ/oᵣ acting by t·(x⊗a) = tx⊗ta.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub name: String,
    pub generators: Vec<Generator>,
}

fn power(m: &Matrix, e: usize) -> Matrix {
    let mut acc = Matrix::identity(m.nrows());
    for _ in 0..e {
        acc = acc.mul(m);
    }
    acc
}

impl GroupAction {
    pub fn trivial(ga: &MapSuperAlgebra) -> Self {
        GroupAction {
            name: "trivial".into(),
            generators: vec![Generator { order: 1, g: Matrix::identity(ga.g().dim()), b: Matrix::identity(ga.b().dim()) }],
        }
    }

    pub fn order(&self) -> usize {
        self.generators.iter().map(|g| g.order).product()
    }

    /// Exponent tuples of all group elements; the identity comes first.
    pub fn elements(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for gen in &self.generators {
            out = out
                .into_iter()
                .flat_map(|e| (0..gen.order).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                }))
                .collect();
        }
        out
    }

    /// (action on g, action on B) for an exponent tuple.
    pub fn element(&self, e: &[usize]) -> (Matrix, Matrix) {
        let mut mg: Option<Matrix> = None;
        let mut mb: Option<Matrix> = None;
        for (gen, &k) in self.generators.iter().zip(e) {
            let pg = power(&gen.g, k);
            let pb = power(&gen.b, k);
            mg = Some(match mg {
                None => pg,
                Some(m) => m.mul(&pg),
            });
            mb = Some(match mb {
                None => pb,
                Some(m) => m.mul(&pb),
            });
        }
        (mg.unwrap(), mb.unwrap())
    }

    /// χ_j(t_e) = Π ζ_{oᵢ}^{jᵢeᵢ}
    pub fn character_value(&self, j: &[usize], e: &[usize]) -> Result<Scalar, MapError> {
        let mut v = Scalar::ONE;
        for ((gen, a), b) in self.generators.iter().zip(j).zip(e) {
            v = &v * &scalar_root_of_unity(gen.order, a * b)?;
        }
        Ok(v)
    }

    pub fn inverse_character(&self, j: &[usize]) -> Vec<usize> {
        self.generators.iter().zip(j).map(|(g, a)| (g.order - a % g.order) % g.order).collect()
    }

    /// Automorphism, order and commutation checks on both factors.
    pub fn validate(&self, ga: &MapSuperAlgebra) -> Result<(), MapError> {
        let g = ga.g();
        let b = ga.b();
        let bad = |s: String| Err(MapError::InvalidAction(s));
        if self.generators.is_empty() {
            return bad("no generators".into());
        }
        for (n, gen) in self.generators.iter().enumerate() {
            scalar_root_of_unity(gen.order, 1)?;
            if gen.g.nrows() != g.dim() || gen.g.ncols() != g.dim() || gen.b.nrows() != b.dim() || gen.b.ncols() != b.dim() {
                return bad(format!("generator {n} has wrong matrix size"));
            }
            if let Some((i, j)) = automorphism_failure(g, &gen.g) {
                return bad(format!("generator {n} does not preserve the bracket on ({i}, {j})"));
            }
            if !b.is_automorphism(&gen.b) {
                return bad(format!("generator {n} is not an automorphism of {}", b.name()));
            }
            if power(&gen.g, gen.order) != Matrix::identity(g.dim()) || power(&gen.b, gen.order) != Matrix::identity(b.dim()) {
                return bad(format!("generator {n} does not have order dividing {}", gen.order));
            }
        }
        for (a, x) in self.generators.iter().enumerate() {
            for y in &self.generators[a + 1..] {
                if x.g.mul(&y.g) != y.g.mul(&x.g) || x.b.mul(&y.b) != y.b.mul(&x.b) {
                    return bad("generators do not commute".into());
                }
            }
        }
        Ok(())
    }

    /// t·𝔪 ≠ 𝔪 for every t ≠ e and every maximal ideal 𝔪 of B.
    pub fn is_free(&self, b: &FinDimCommAlgebra) -> Result<bool, MapError> {
        let maxes = b.maximal_ideals()?;
        for e in self.elements().iter().skip(1) {
            let (_, mb) = self.element(e);
            for m in &maxes {
                let image = m.ideal.space.map(b.dim(), |v| mb.mul_vec(v));
                if image.same_as(&m.ideal.space) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// (1/|T|) Σ_t A_g(t) ⊗ A_B(t) on g⊗B.
    pub fn averaging_projector(&self) -> Matrix {
        let els = self.elements();
        let (g0, b0) = self.element(&els[0]);
        let mut acc = Matrix::zero(g0.nrows() * b0.nrows(), g0.ncols() * b0.ncols());
        for e in &els {
            let (mg, mb) = self.element(e);
            acc = acc.add(&mg.kron(&mb));
        }
        acc.scale(&Scalar::frac(1, els.len() as i64))
    }

    /// (1/|T|) Σ_t χ(t)⁻¹ A(t) on one factor.
    fn character_projector(&self, j: &[usize], on_g: bool) -> Result<Matrix, MapError> {
        let els = self.elements();
        let mut acc: Option<Matrix> = None;
        for e in &els {
            let (mg, mb) = self.element(e);
            let m = if on_g { mg } else { mb };
            let c = self.character_value(j, e)?.recip();
            acc = Some(match acc {
                None => m.scale(&c),
                Some(a) => a.add_scaled(&m, &c),
            });
        }
        Ok(acc.unwrap().scale(&Scalar::frac(1, els.len() as i64)))
    }
}

/// First basis pair (i, j) with A[eᵢ,eⱼ] ≠ [Aeᵢ,Aeⱼ], or a parity/degree
/// mismatch reported as (i, i).
fn automorphism_failure(g: &SuperAlgebra, a: &Matrix) -> Option<(usize, usize)> {
    let d = g.dim();
    if a.rank() != d {
        return Some((0, 0));
    }
    for i in 0..d {
        let col = a.column(i);
        if col.iter().any(|(k, _)| g.is_odd(*k) != g.is_odd(i) || g.degree(*k) != g.degree(i)) {
            return Some((i, i));
        }
    }
    for i in 0..d {
        for j in 0..d {
            if a.mul_vec(g.bracket_basis(i, j)) != g.bracket(a.column(i), a.column(j)) {
                return Some((i, j));
            }
        }
    }
    None
}

/// The automorphism induced by ξₖ ↦ εₖξₖ on a family member: ξ^m∂ᵢ is
/// scaled by (Π_{k∈m} εₖ)·εᵢ⁻¹.
pub fn diagonal_automorphism(g: &SuperAlgebra, eps: &[Scalar]) -> Result<Matrix, MapError> {
    let w = g.witness().ok_or(MapError::InvalidAction(format!("{} has no vector-field realization", g.name())))?;
    let n = w.coords.n();
    if eps.len() != n || eps.iter().any(|e| e.is_zero()) {
        return Err(MapError::InvalidAction("need one nonzero scalar per generator".into()));
    }
    let factor = |k: usize| {
        let (m, i) = w.coords.elem(k);
        let mut c = eps[i - 1].recip();
        for f in m.factors() {
            c = &c * &eps[f - 1];
        }
        c
    };
    let mut t = Tracked::new(w.coords.dim(), g.dim());
    for (i, v) in w.vectors.iter().enumerate() {
        t.insert(v.clone(), SparseVec::unit(i));
    }
    let cols = w
        .vectors
        .iter()
        .map(|v| {
            let image = SparseVec::from_pairs(v.iter().map(|(k, c)| (*k, c * &factor(*k))).collect());
            t.express(&image).ok_or_else(|| MapError::InvalidAction(format!("substitution does not preserve {}", g.name())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_columns(g.dim(), cols))
}

/// Named automorphisms of g: (name, order, generator scalars εₖ).
pub fn catalog_g_actions() -> &'static [&'static str] {
    &["identity", "sign_flip_xi1", "sign_flip_xi12", "parity", "scale_xi1_i"]
}

pub fn catalog_coeff_actions() -> &'static [&'static str] {
    &["identity", "negate_x", "swap_points", "rotate_x_i"]
}

fn g_action(name: &str, g: &SuperAlgebra) -> Result<Matrix, MapError> {
    let n = g.witness().map(|w| w.coords.n()).unwrap_or(0);
    let mut eps = vec![Scalar::ONE; n];
    match name {
        "identity" => return Ok(Matrix::identity(g.dim())),
        "sign_flip_xi1" => eps[0] = Scalar::int(-1),
        "sign_flip_xi12" => {
            eps[0] = Scalar::int(-1);
            eps[1] = Scalar::int(-1);
        }
        "parity" => eps.iter_mut().for_each(|e| *e = Scalar::int(-1)),
        "scale_xi1_i" => eps[0] = Scalar::i(),
        _ => return Err(MapError::UnknownAction(name.to_string())),
    }
    diagonal_automorphism(g, &eps)
}

fn coeff_action(name: &str, b: &FinDimCommAlgebra) -> Result<Matrix, MapError> {
    Ok(match name {
        "identity" => Matrix::identity(b.dim()),
        "negate_x" => b.substitution(&Scalar::int(-1), &Scalar::ZERO)?,
        "rotate_x_i" => b.substitution(&Scalar::i(), &Scalar::ZERO)?,
        "swap_points" => {
            if b.dim() != 2 || b.coordinate().is_none() {
                return Err(MapError::InvalidAction("swap_points needs a two-point algebra".into()));
            }
            // x ↦ (p₀ + p₁) − x
            let sum = b.mult_op(b.coordinate().unwrap()).trace();
            b.substitution(&Scalar::int(-1), &sum)?
        }
        _ => return Err(MapError::UnknownAction(name.to_string())),
    })
}

/// A catalog reference such as `{action: "sign_flip_xi1", group: "Z2", coeff_action: "negate_x"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub action: String,
    pub group: String,
    pub coeff_action: String,
}

impl ActionSpec {
    pub fn new(action: &str, group: &str, coeff_action: &str) -> Self {
        ActionSpec { action: action.into(), group: group.into(), coeff_action: coeff_action.into() }
    }

    pub fn order(&self) -> Result<usize, MapError> {
        let k: usize = self
            .group
            .strip_prefix('Z')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| MapError::UnknownAction(self.group.clone()))?;
        scalar_root_of_unity(k, 1)?;
        Ok(k)
    }

    pub fn build(&self, ga: &MapSuperAlgebra) -> Result<GroupAction, MapError> {
        let order = self.order()?;
        let act = GroupAction {
            name: format!("{}/{}/{}", self.action, self.group, self.coeff_action),
            generators: vec![Generator { order, g: g_action(&self.action, ga.g())?, b: coeff_action(&self.coeff_action, ga.b())? }],
        };
        act.validate(ga)?;
        Ok(act)
    }
}

/// (g⊗B)^T with its embedding into g⊗B.
#[derive(Clone, Debug)]
pub struct FixedPoints {
    pub algebra: Arc<SuperAlgebra>,
    pub embedding: Matrix,
    pub space: Subspace,
    pub projector_rank: usize,
}

pub fn fixed_point_subalgebra(ga: &MapSuperAlgebra, act: &GroupAction) -> Result<FixedPoints, MapError> {
    act.validate(ga)?;
    let p = act.averaging_projector();
    let space = p.image();
    let name = format!("({})^T", ga.flat().name());
    let (alg, embedding) = ga.flat().subalgebra(name, &space)?;
    Ok(FixedPoints { algebra: Arc::new(alg), embedding, projector_rank: space.dim(), space })
}

#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    /// Exponents j with χ_j(t) = Π ζ^{jᵢeᵢ}.
    pub character: Vec<usize>,
    pub g_space: Subspace,
    pub b_space: Subspace,
}

#[derive(Clone, Debug)]
pub struct IsotypicDecomposition {
    pub components: Vec<IsotypicComponent>,
    /// ⊕_χ g_χ ⊗ B_{χ⁻¹}
    pub predicted_fixed: Subspace,
    pub matches_fixed: bool,
}

impl IsotypicDecomposition {
    pub fn component(&self, j: &[usize]) -> Option<&IsotypicComponent> {
        self.components.iter().find(|c| c.character == j)
    }
}

pub fn isotypic_decompose(ga: &MapSuperAlgebra, act: &GroupAction) -> Result<IsotypicDecomposition, MapError> {
    act.validate(ga)?;
    let mut components = Vec::new();
    for j in act.elements() {
        components.push(IsotypicComponent {
            g_space: act.character_projector(&j, true)?.image(),
            b_space: act.character_projector(&j, false)?.image(),
            character: j,
        });
    }
    let mut predicted = Subspace::zero(ga.dim());
    for c in &components {
        let inv = act.inverse_character(&c.character);
        let partner = components.iter().find(|d| d.character == inv).expect("characters form a group");
        for x in c.g_space.basis() {
            for a in partner.b_space.basis() {
                predicted.insert(ga.pure(x, a));
            }
        }
    }
    let fixed = act.averaging_projector().image();
    let matches_fixed = fixed.same_as(&predicted);
    Ok(IsotypicDecomposition { components, predicted_fixed: predicted, matches_fixed })
}
