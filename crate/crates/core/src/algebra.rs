//! The truncated polynomial algebra `k[X_1..X_r]/(X_i^p)` (the group algebra of an
//! elementary abelian p-group) and finite-dimensional modules over it.
//!
//! Monomials are ordered by total degree, ties broken reverse-lexicographically with
//! `X_1 < ... < X_r`. Index 0 is the unit and the last index is the socle monomial
//! `X_1^{p-1}...X_r^{p-1}`. Generators act as primitive elements, so on `Hom_k(M, N)`
//! the action is `X.f = X f(-) - f(X -)` and on `M*` it is `X.phi = -phi(X -)`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Fp, Mat, QuotientCoords, Subspace};

/// Exponent vector of a monomial.
pub type Exponents = Vec<u8>;

/// `k[X_1..X_r]/(X_i^p)` with its monomial basis.
#[derive(Clone, Serialize, Deserialize)]
pub struct AlgebraSpec {
    field: Fp,
    names: Vec<String>,
    monomials: Vec<Exponents>,
    #[serde(skip)]
    tables: OnceLock<Tables>,
}

#[derive(Clone)]
struct Tables {
    /// mixed-radix code of an exponent vector -> monomial index
    index_of_code: Vec<usize>,
    /// `mult[i * dim + j]` = index of `m_i * m_j`, or `usize::MAX` if it vanishes
    mult: Vec<usize>,
}

impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.names == other.names
    }
}
impl Eq for AlgebraSpec {}

impl fmt::Debug for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[{}]/(p-th powers)", self.field.p(), self.names.join(","))
    }
}

/// Compares two exponent vectors in the global monomial order.
pub fn monomial_cmp(a: &[u8], b: &[u8]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let da: u32 = a.iter().map(|&x| x as u32).sum();
    let db: u32 = b.iter().map(|&x| x as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    // reverse lexicographic: the monomial with the smaller last differing exponent is larger
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return if a[i] < b[i] { Ordering::Greater } else { Ordering::Less };
        }
    }
    Ordering::Equal
}

impl AlgebraSpec {
    pub fn new(p: u32, names: &[&str]) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        Self::from_names(p, names)
    }

    pub fn from_names(p: u32, names: Vec<String>) -> Result<Arc<Self>> {
        let field = Fp::new(p)?;
        if names.is_empty() {
            return Err(Error::InvalidModule("the algebra needs at least one generator".into()));
        }
        let r = names.len();
        let dim = (p as usize).pow(r as u32);
        let mut monomials: Vec<Exponents> = (0..dim)
            .map(|mut code| {
                (0..r)
                    .map(|_| {
                        let e = (code % p as usize) as u8;
                        code /= p as usize;
                        e
                    })
                    .collect()
            })
            .collect();
        monomials.sort_by(|a, b| monomial_cmp(a, b));
        Ok(Arc::new(AlgebraSpec { field, names, monomials, tables: OnceLock::new() }))
    }

    /// Default generator names `X, Y, Z, W, ...` for small ranks.
    pub fn with_rank(p: u32, r: usize) -> Result<Arc<Self>> {
        let names: Vec<String> = match r {
            1..=4 => ["X", "Y", "Z", "W"][..r].iter().map(|s| s.to_string()).collect(),
            _ => (1..=r).map(|i| format!("X{i}")).collect(),
        };
        Self::from_names(p, names)
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| {
            let p = self.field.p() as usize;
            let dim = self.monomials.len();
            let mut index_of_code = vec![0; dim];
            for (i, m) in self.monomials.iter().enumerate() {
                index_of_code[code(m, p)] = i;
            }
            let mut mult = vec![usize::MAX; dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    let prod: Option<Vec<u8>> = self.monomials[i]
                        .iter()
                        .zip(&self.monomials[j])
                        .map(|(a, b)| if (*a + *b) as usize >= p { None } else { Some(a + b) })
                        .collect();
                    if let Some(e) = prod {
                        mult[i * dim + j] = index_of_code[code(&e, p)];
                    }
                }
            }
            Tables { index_of_code, mult }
        })
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn p(&self) -> u32 {
        self.field.p() as u32
    }
    pub fn rank(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    /// `p^r`.
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }
    pub fn monomials(&self) -> &[Exponents] {
        &self.monomials
    }
    pub fn monomial(&self, i: usize) -> &[u8] {
        &self.monomials[i]
    }

    pub fn monomial_index(&self, e: &[u8]) -> Option<usize> {
        let p = self.field.p();
        if e.len() != self.rank() || e.iter().any(|&x| x >= p) {
            return None;
        }
        Some(self.tables().index_of_code[code(e, p as usize)])
    }

    /// Index of the socle monomial `prod X_i^{p-1}`.
    pub fn top_index(&self) -> usize {
        self.dim() - 1
    }

    /// Index of `m_i * m_j`, if nonzero.
    #[inline]
    pub fn mul_index(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.tables().mult[i * self.dim() + j];
        (k != usize::MAX).then_some(k)
    }

    /// Index of the generator `X_i` as a monomial.
    pub fn generator_index(&self, i: usize) -> usize {
        let mut e = vec![0u8; self.rank()];
        e[i] = 1;
        self.monomial_index(&e).expect("generator is a monomial")
    }

    pub fn monomial_name(&self, i: usize) -> String {
        let e = &self.monomials[i];
        let mut s = String::new();
        for (k, &x) in e.iter().enumerate() {
            match x {
                0 => {}
                1 => s.push_str(&self.names[k]),
                _ => s.push_str(&format!("{}^{}", self.names[k], x)),
            }
        }
        s
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem(vec![0; self.dim()])
    }

    pub fn one(&self) -> AlgElem {
        self.monomial_elem(0, 1)
    }

    pub fn monomial_elem(&self, idx: usize, coeff: u8) -> AlgElem {
        let mut v = vec![0; self.dim()];
        v[idx] = coeff;
        AlgElem(v)
    }

    /// The element `X_1^{e_1} ... X_r^{e_r}`; zero if some exponent reaches p.
    pub fn monomial_from_exponents(&self, e: &[u8]) -> AlgElem {
        match self.monomial_index(e) {
            Some(i) => self.monomial_elem(i, 1),
            None => self.zero(),
        }
    }

    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let f = self.field;
        let mut out = vec![0u8; self.dim()];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                if let Some(k) = self.mul_index(i, j) {
                    out[k] = f.add(out[k], f.mul(x, y));
                }
            }
        }
        AlgElem(out)
    }

    pub fn format_elem(&self, a: &AlgElem) -> String {
        let terms: Vec<String> = a
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let name = self.monomial_name(i);
                let c = self.field.signed(c);
                match (c, name.is_empty()) {
                    (1, false) => name,
                    (-1, false) => format!("-{name}"),
                    (_, true) => c.to_string(),
                    _ => format!("{c}*{name}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        }
    }
}

fn code(e: &[u8], p: usize) -> usize {
    e.iter().rev().fold(0, |acc, &x| acc * p + x as usize)
}

/// An element of the algebra, as coefficients on the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgElem(pub Vec<u8>);

impl AlgElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
    pub fn coeffs(&self) -> &[u8] {
        &self.0
    }
}

/// A finite-dimensional module: one commuting nilpotent matrix per generator, acting on
/// column vectors.
#[derive(Clone, Serialize, Deserialize)]
pub struct ModuleRep {
    alg: Arc<AlgebraSpec>,
    dim: usize,
    actions: Vec<Mat>,
    labels: Option<Vec<String>>,
    #[serde(skip)]
    monomial_actions: OnceLock<Vec<Mat>>,
}

impl PartialEq for ModuleRep {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.dim == other.dim && self.actions == other.actions
    }
}
impl Eq for ModuleRep {}

impl fmt::Debug for ModuleRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleRep(dim {} over {:?})", self.dim, self.alg)
    }
}

impl ModuleRep {
    /// Builds a module, checking that the actions commute and have vanishing p-th powers.
    pub fn new(alg: Arc<AlgebraSpec>, actions: Vec<Mat>, labels: Option<Vec<String>>) -> Result<Self> {
        let r = alg.rank();
        if actions.len() != r {
            return Err(Error::InvalidModule(format!("expected {r} action matrices, got {}", actions.len())));
        }
        let dim = actions[0].rows();
        for (i, a) in actions.iter().enumerate() {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::InvalidModule(format!("action {i} is not {dim}x{dim}")));
            }
            if a.field() != alg.field() {
                return Err(Error::InvalidModule("action matrix over the wrong field".into()));
            }
            if !a.pow(alg.p()).is_zero() {
                return Err(Error::InvalidModule(format!("{}^p does not act as zero", alg.names()[i])));
            }
        }
        for i in 0..r {
            for j in i + 1..r {
                if actions[i].mul(&actions[j]) != actions[j].mul(&actions[i]) {
                    return Err(Error::InvalidModule(format!(
                        "{} and {} do not commute",
                        alg.names()[i],
                        alg.names()[j]
                    )));
                }
            }
        }
        if let Some(l) = &labels {
            if l.len() != dim {
                return Err(Error::InvalidModule("wrong number of basis labels".into()));
            }
        }
        Ok(ModuleRep { alg, dim, actions, labels, monomial_actions: OnceLock::new() })
    }

    fn new_unchecked(alg: Arc<AlgebraSpec>, actions: Vec<Mat>, labels: Option<Vec<String>>) -> Self {
        let dim = actions[0].rows();
        debug_assert!(Self::new(alg.clone(), actions.clone(), labels.clone()).is_ok());
        ModuleRep { alg, dim, actions, labels, monomial_actions: OnceLock::new() }
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.alg
    }
    pub fn field(&self) -> Fp {
        self.alg.field()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn actions(&self) -> &[Mat] {
        &self.actions
    }
    pub fn action(&self, i: usize) -> &Mat {
        &self.actions[i]
    }
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = Some(labels);
        self
    }

    /// The trivial module k.
    pub fn trivial(alg: &Arc<AlgebraSpec>) -> Self {
        let z = Mat::zeros(alg.field(), 1, 1);
        ModuleRep::new_unchecked(alg.clone(), vec![z; alg.rank()], Some(vec!["1".into()]))
    }

    pub fn zero_module(alg: &Arc<AlgebraSpec>) -> Self {
        let z = Mat::zeros(alg.field(), 0, 0);
        ModuleRep { alg: alg.clone(), dim: 0, actions: vec![z; alg.rank()], labels: None, monomial_actions: OnceLock::new() }
    }

    /// Free module of the given rank; basis vector `g * p^r + m` is monomial `m` on generator `g`.
    pub fn free(alg: &Arc<AlgebraSpec>, rank: usize) -> Self {
        if rank == 0 {
            return Self::zero_module(alg);
        }
        let d = alg.dim();
        let f = alg.field();
        let actions = (0..alg.rank())
            .map(|i| {
                let gi = alg.generator_index(i);
                let mut a = Mat::zeros(f, rank * d, rank * d);
                for g in 0..rank {
                    for m in 0..d {
                        if let Some(k) = alg.mul_index(gi, m) {
                            a.set(g * d + k, g * d + m, 1);
                        }
                    }
                }
                a
            })
            .collect();
        ModuleRep { alg: alg.clone(), dim: rank * d, actions, labels: None, monomial_actions: OnceLock::new() }
    }

    /// The regular module, i.e. the algebra acting on itself by left multiplication.
    pub fn regular(alg: &Arc<AlgebraSpec>) -> Self {
        let labels = (0..alg.dim())
            .map(|i| {
                let n = alg.monomial_name(i);
                if n.is_empty() {
                    "1".into()
                } else {
                    n
                }
            })
            .collect();
        Self::free(alg, 1).with_labels(labels)
    }

    /// Action matrices of all monomials, in monomial order.
    pub fn monomial_actions(&self) -> &[Mat] {
        self.monomial_actions.get_or_init(|| {
            let alg = &self.alg;
            let f = alg.field();
            let mut out: Vec<Option<Mat>> = vec![None; alg.dim()];
            out[0] = Some(Mat::identity(f, self.dim));
            // monomials are sorted by degree, so a predecessor is always ready
            for idx in 1..alg.dim() {
                let e = alg.monomial(idx);
                let k = e.iter().position(|&x| x > 0).unwrap();
                let mut prev = e.to_vec();
                prev[k] -= 1;
                let pi = alg.monomial_index(&prev).unwrap();
                out[idx] = Some(self.actions[k].mul(out[pi].as_ref().unwrap()));
            }
            out.into_iter().map(Option::unwrap).collect()
        })
    }

    /// Matrix by which an algebra element acts.
    pub fn elem_action(&self, a: &AlgElem) -> Mat {
        let mons = self.monomial_actions();
        let mut out = Mat::zeros(self.field(), self.dim, self.dim);
        for (i, &c) in a.0.iter().enumerate() {
            if c != 0 {
                out.add_scaled(&mons[i], c);
            }
        }
        out
    }

    /// `a . v`.
    pub fn act(&self, a: &AlgElem, v: &[u8]) -> Vec<u8> {
        let f = self.field();
        let mons = self.monomial_actions();
        let mut out = vec![0u8; self.dim];
        for (i, &c) in a.0.iter().enumerate() {
            if c != 0 {
                let w = mons[i].mul_vec(v);
                f.axpy(&mut out, &w, c);
            }
        }
        out
    }

    /// `rad M = sum X_i M`.
    pub fn radical(&self) -> Subspace {
        let f = self.field();
        let mut rows = Mat::zeros(f, 0, self.dim);
        for a in &self.actions {
            let t = a.transpose();
            for i in 0..t.rows() {
                rows.push_row(t.row(i));
            }
        }
        Subspace::from_rows(&rows)
    }

    /// `soc M = intersection of ker X_i`.
    pub fn socle(&self) -> Subspace {
        let f = self.field();
        let mut stacked = Mat::zeros(f, 0, self.dim);
        for a in &self.actions {
            stacked = stacked.vstack(a);
        }
        crate::linalg::kernel_basis(&stacked)
    }

    /// Minimal number of generators.
    pub fn top_rank(&self) -> usize {
        self.dim - self.radical().dim()
    }

    /// Rank of the free summand: the rank of the socle monomial's action.
    pub fn free_summand_rank(&self) -> usize {
        let top = &self.monomial_actions()[self.alg.top_index()];
        top.rank()
    }

    /// `M* = Hom_k(M, k)` in the dual basis.
    pub fn dual(&self) -> ModuleRep {
        let f = self.field();
        let actions = self.actions.iter().map(|a| a.transpose().scaled(f.neg(1))).collect();
        let labels = self.labels.as_ref().map(|l| l.iter().map(|s| format!("{s}*")).collect());
        ModuleRep::new_unchecked(self.alg.clone(), actions, labels)
    }

    /// `Hom_k(self, target)`; the map `f` (a `dim N x dim M` matrix) has coordinate
    /// `f[i][j]` at index `i * dim M + j`.
    pub fn hom_k(&self, target: &ModuleRep) -> Result<ModuleRep> {
        if self.alg != target.alg {
            return Err(Error::AlgebraMismatch);
        }
        let f = self.field();
        let (m, n) = (self.dim, target.dim);
        if m == 0 || n == 0 {
            return Ok(ModuleRep::zero_module(&self.alg));
        }
        let actions = (0..self.alg.rank())
            .map(|k| {
                let a = &self.actions[k];
                let b = &target.actions[k];
                let mut h = Mat::zeros(f, n * m, n * m);
                // (X.f)[i][j] = sum_l b[i][l] f[l][j] - sum_l f[i][l] a[l][j]
                for i in 0..n {
                    for j in 0..m {
                        let row = i * m + j;
                        for l in 0..n {
                            let c = b.get(i, l);
                            if c != 0 {
                                let col = l * m + j;
                                h.set(row, col, f.add(h.get(row, col), c));
                            }
                        }
                        for l in 0..m {
                            let c = a.get(l, j);
                            if c != 0 {
                                let col = i * m + l;
                                h.set(row, col, f.sub(h.get(row, col), c));
                            }
                        }
                    }
                }
                h
            })
            .collect();
        Ok(ModuleRep::new_unchecked(self.alg.clone(), actions, None))
    }

    /// Submodule spanned by an invariant subspace, with its embedding (columns = basis).
    pub fn submodule(&self, sub: &Subspace) -> (ModuleRep, Mat) {
        let f = self.field();
        let k = sub.dim();
        let emb = sub.basis().transpose();
        if k == 0 {
            return (ModuleRep::zero_module(&self.alg), emb);
        }
        let actions = self
            .actions
            .iter()
            .map(|a| {
                let img = a.mul(&emb);
                let mut b = Mat::zeros(f, k, k);
                for j in 0..k {
                    let v = img.col(j);
                    debug_assert!(sub.contains(&v), "subspace is not invariant");
                    for (i, c) in sub.coords(&v).into_iter().enumerate() {
                        b.set(i, j, c);
                    }
                }
                b
            })
            .collect();
        (ModuleRep::new_unchecked(self.alg.clone(), actions, None), emb)
    }

    /// Quotient by an invariant subspace, with the projection matrix.
    pub fn quotient(&self, sub: &Subspace) -> (ModuleRep, Mat) {
        let f = self.field();
        let q = QuotientCoords::new(sub.clone(), &Subspace::full(f, self.dim)).expect("same ambient");
        let k = q.dim();
        let mut proj = Mat::zeros(f, k, self.dim);
        for j in 0..self.dim {
            let mut e = vec![0u8; self.dim];
            e[j] = 1;
            for (i, c) in q.coords(&e).into_iter().enumerate() {
                proj.set(i, j, c);
            }
        }
        if k == 0 {
            return (ModuleRep::zero_module(&self.alg), proj);
        }
        let lift = q.complement().basis().transpose();
        let actions = self.actions.iter().map(|a| proj.mul(&a.mul(&lift))).collect();
        (ModuleRep::new_unchecked(self.alg.clone(), actions, None), proj)
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &ModuleRep) -> Result<ModuleRep> {
        if self.alg != other.alg {
            return Err(Error::AlgebraMismatch);
        }
        let f = self.field();
        let (a, b) = (self.dim, other.dim);
        let actions = (0..self.alg.rank())
            .map(|k| {
                let mut m = Mat::zeros(f, a + b, a + b);
                for i in 0..a {
                    for j in 0..a {
                        m.set(i, j, self.actions[k].get(i, j));
                    }
                }
                for i in 0..b {
                    for j in 0..b {
                        m.set(a + i, a + j, other.actions[k].get(i, j));
                    }
                }
                m
            })
            .collect();
        Ok(ModuleRep::new_unchecked(self.alg.clone(), actions, None))
    }

    /// Whether the linear map `f: self -> target` (a `dim target x dim self` matrix) commutes
    /// with every generator.
    pub fn is_homomorphism(&self, target: &ModuleRep, f: &Mat) -> bool {
        self.actions
            .iter()
            .zip(&target.actions)
            .all(|(a, b)| b.mul(f) == f.mul(a))
    }
}

/// A free presentation `F / L`: `relations` are vectors in `F = Λ^free_rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub alg: Arc<AlgebraSpec>,
    pub generator_names: Vec<String>,
    pub relations: Vec<Vec<AlgElem>>,
}

impl Presentation {
    pub fn free_rank(&self) -> usize {
        self.generator_names.len()
    }
}

/// Vector of the free module `Λ^n` from per-generator algebra elements.
pub fn free_vector(parts: &[AlgElem]) -> Vec<u8> {
    parts.iter().flat_map(|a| a.0.iter().copied()).collect()
}

/// `F / ΛL`, with basis the free-module coordinates that survive reduction when pivots
/// are taken from the right, so earlier monomials are kept as representatives.
pub fn quotient_by_relations(pres: &Presentation) -> Result<ModuleRep> {
    let alg = &pres.alg;
    let f = alg.field();
    let d = alg.dim();
    let n = pres.free_rank();
    if n == 0 {
        return Ok(ModuleRep::zero_module(alg));
    }
    let free = ModuleRep::free(alg, n);
    let total = n * d;
    let mut gens = Mat::zeros(f, 0, total);
    for rel in &pres.relations {
        if rel.len() != n {
            return Err(Error::InvalidModule(format!("relation has {} components, expected {n}", rel.len())));
        }
        let v = free_vector(rel);
        for mon in 0..d {
            let w = free.act(&alg.monomial_elem(mon, 1), &v);
            gens.push_row(&reversed(&w));
        }
    }
    let sub_rev = Subspace::from_rows(&gens);
    let mut is_pivot = vec![false; total];
    for &pc in sub_rev.pivots() {
        is_pivot[total - 1 - pc] = true;
    }
    let survivors: Vec<usize> = (0..total).filter(|&c| !is_pivot[c]).collect();
    let k = survivors.len();
    let labels: Vec<String> = survivors
        .iter()
        .map(|&c| {
            let (g, m) = (c / d, c % d);
            format!("{}{}", alg.monomial_name(m), pres.generator_names[g])
        })
        .collect();
    if k == 0 {
        return Ok(ModuleRep::zero_module(alg));
    }
    let actions = free
        .actions()
        .iter()
        .map(|a| {
            let mut b = Mat::zeros(f, k, k);
            for (j, &c) in survivors.iter().enumerate() {
                let img = a.col(c);
                let red = reversed(&sub_rev.reduce(&reversed(&img)));
                for (i, &s) in survivors.iter().enumerate() {
                    b.set(i, j, red[s]);
                }
            }
            b
        })
        .collect();
    ModuleRep::new(alg.clone(), actions, Some(labels))
}

fn reversed(v: &[u8]) -> Vec<u8> {
    v.iter().rev().copied().collect()
}
