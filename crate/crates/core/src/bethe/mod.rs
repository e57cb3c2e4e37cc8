//! Bethe ansatz: problems, the Bethe ansatz equations and their Jacobian,
//! weight functions, eigenvalue formulas and closed-form solutions.

mod closed;
mod weight;

pub use closed::{
    gl11_bethe_vector_norm, gl11_exact_roots, gl11_norms, gl11_solve, gl21_closed_form, gl21_one_point,
    gl21_verify_family, map_two_point, two_point_solve, Gl11Roots, Gl21ClosedForm, OnePointFamily,
};
pub use weight::{
    ordered_partitions, partition_count, partition_sign, weight_function, weight_function_words, OrderedPartition,
    WordExpansion, MAX_PARTITION_ROOTS, MAX_PARTITION_SITES,
};


use crate::error::{Error, Result};
use crate::gaudin::ChainSpec;
use crate::linalg::{determinant, Matrix};
use crate::scalar::{rat, rational_to_f64, Complex64, Rational, Scalar};
use crate::superalg::{weight_inner, ParitySequence, Weight};

/// A Bethe ansatz problem: a chain and the number of roots of each colour.
///
/// Roots are laid out canonically: all roots of colour 0, then colour 1, etc.
#[derive(Clone, Debug)]
pub struct BetheProblem {
    chain: ChainSpec,
    l: Vec<usize>,
    colours: Vec<usize>,
    site_pairing: Vec<Vec<Rational>>,
    root_pairing: Vec<Vec<Rational>>,
}

impl BetheProblem {
    pub fn new(chain: ChainSpec, l: Vec<usize>) -> Result<Self> {
        let ps = chain.parity_sequence().clone();
        if l.len() != ps.rank() {
            return Err(Error::DimensionMismatch(format!("{} root counts for {} simple roots", l.len(), ps.rank())));
        }
        let k = ps.len();
        let colours: Vec<usize> = l.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat_n(c, n)).collect();
        let roots: Vec<Weight> = (0..ps.rank()).map(|a| Weight::simple_root(k, a)).collect();
        let site_pairing = roots
            .iter()
            .map(|al| chain.sites().iter().map(|s| weight_inner(&ps, al, s.module.hw_weight())).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let root_pairing = roots
            .iter()
            .map(|a| roots.iter().map(|b| weight_inner(&ps, a, b)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Ok(BetheProblem { chain, l, colours, site_pairing, root_pairing })
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn parity_sequence(&self) -> &ParitySequence {
        self.chain.parity_sequence()
    }

    pub fn l(&self) -> &[usize] {
        &self.l
    }

    pub fn num_roots(&self) -> usize {
        self.colours.len()
    }

    /// Colour of each root in the canonical layout.
    pub fn colours(&self) -> &[usize] {
        &self.colours
    }

    /// `(alpha_c, lambda^{(s)})`.
    pub fn site_pairing(&self, colour: usize, site: usize) -> &Rational {
        &self.site_pairing[colour][site]
    }

    /// `(alpha_c, alpha_d)`.
    pub fn root_pairing(&self, c: usize, d: usize) -> &Rational {
        &self.root_pairing[c][d]
    }

    /// `sum_s lambda^{(s)} - sum_a l_a alpha_a`, the weight of the Bethe vector.
    pub fn lambda_inf(&self) -> Weight {
        let k = self.parity_sequence().len();
        self.l.iter().enumerate().fold(self.chain.total_weight(), |w, (a, &n)| {
            &w - &Weight::simple_root(k, a).scale(&rat(n as i64))
        })
    }

    /// Site coordinates embedded in `T`.
    pub fn z_as<T: Scalar>(&self) -> Result<Vec<T>> {
        self.chain
            .sites()
            .iter()
            .map(|s| T::try_from_gaussian(&s.z).ok_or_else(|| Error::FieldMismatch(format!("site coordinate {}", s.z))))
            .collect()
    }

    fn check_roots<T: Scalar>(&self, t: &[T]) -> Result<()> {
        if t.len() != self.num_roots() {
            return Err(Error::DimensionMismatch(format!("{} roots for a problem with {}", t.len(), self.num_roots())));
        }
        Ok(())
    }

    /// Magnitude scale for pole detection.
    fn scale<T: Scalar>(&self, z: &[T], t: &[T]) -> f64 {
        z.iter().chain(t).map(|x| x.abs_approx()).fold(1.0, f64::max)
    }

    /// Fails if a root meets a site, or another root it interacts with.
    pub fn check_poles<T: Scalar>(&self, t: &[T]) -> Result<()> {
        self.check_poles_at(&self.z_as::<T>()?, t)
    }

    /// [`BetheProblem::check_poles`] with explicit site coordinates.
    pub fn check_poles_at<T: Scalar>(&self, z: &[T], t: &[T]) -> Result<()> {
        self.check_roots(t)?;
        let scale = self.scale(z, t);
        for (i, ti) in t.iter().enumerate() {
            for (s, zs) in z.iter().enumerate() {
                if (ti.clone() - zs.clone()).is_negligible(scale) {
                    return Err(Error::PoleCollision(format!("root {i} meets site {s}")));
                }
            }
            for (j, tj) in t.iter().enumerate().skip(i + 1) {
                let b = &self.root_pairing[self.colours[i]][self.colours[j]];
                if !b.is_zero() && (ti.clone() - tj.clone()).is_negligible(scale) {
                    return Err(Error::PoleCollision(format!("roots {i} and {j} coincide")));
                }
            }
        }
        Ok(())
    }

    /// The Bethe ansatz equations
    /// `-sum_s (alpha_{c(i)}, lambda^{(s)}) / (t_i - z_s)
    ///  + sum_{j != i} (alpha_{c(i)}, alpha_{c(j)}) / (t_i - t_j)`.
    pub fn residual<T: Scalar>(&self, t: &[T]) -> Result<Vec<T>> {
        self.residual_at(&self.z_as::<T>()?, t)
    }

    /// [`BetheProblem::residual`] with explicit site coordinates.
    pub fn residual_at<T: Scalar>(&self, z: &[T], t: &[T]) -> Result<Vec<T>> {
        self.check_poles_at(z, t)?;
        Ok((0..t.len())
            .map(|i| {
                let c = self.colours[i];
                let mut r = T::zero();
                for (s, zs) in z.iter().enumerate() {
                    let a = &self.site_pairing[c][s];
                    if !a.is_zero() {
                        r = r - T::from_rational(a) / (t[i].clone() - zs.clone());
                    }
                }
                for j in 0..t.len() {
                    let b = &self.root_pairing[c][self.colours[j]];
                    if j != i && !b.is_zero() {
                        r = r + T::from_rational(b) / (t[i].clone() - t[j].clone());
                    }
                }
                r
            })
            .collect())
    }

    /// Largest absolute term of each equation, the natural scale of its residual.
    pub fn term_scale_at(&self, z: &[Complex64], t: &[Complex64]) -> Vec<f64> {
        (0..t.len())
            .map(|i| {
                let c = self.colours[i];
                let mut m: f64 = 0.0;
                for (s, zs) in z.iter().enumerate() {
                    let a = rational_to_f64(&self.site_pairing[c][s]).abs();
                    if a != 0.0 {
                        m = m.max(a / (t[i] - zs).norm());
                    }
                }
                for j in 0..t.len() {
                    let b = rational_to_f64(&self.root_pairing[c][self.colours[j]]).abs();
                    if j != i && b != 0.0 {
                        m = m.max(b / (t[i] - t[j]).norm());
                    }
                }
                m
            })
            .collect()
    }

    /// Jacobian of [`BetheProblem::residual`], equal to the Hessian of the
    /// logarithm of the master function.
    pub fn jacobian<T: Scalar>(&self, t: &[T]) -> Result<Matrix<T>> {
        self.jacobian_at(&self.z_as::<T>()?, t)
    }

    /// [`BetheProblem::jacobian`] with explicit site coordinates.
    pub fn jacobian_at<T: Scalar>(&self, z: &[T], t: &[T]) -> Result<Matrix<T>> {
        self.check_poles_at(z, t)?;
        let n = t.len();
        let mut jac = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            let c = self.colours[i];
            let mut diag = T::zero();
            for (s, zs) in z.iter().enumerate() {
                let a = &self.site_pairing[c][s];
                if !a.is_zero() {
                    let d = t[i].clone() - zs.clone();
                    diag = diag + T::from_rational(a) / (d.clone() * d);
                }
            }
            for j in 0..n {
                let b = &self.root_pairing[c][self.colours[j]];
                if j != i && !b.is_zero() {
                    let d = t[i].clone() - t[j].clone();
                    let term = T::from_rational(b) / (d.clone() * d);
                    diag = diag - term.clone();
                    jac[i][j] = term;
                }
            }
            jac[i][i] = diag;
        }
        Ok(jac)
    }

    /// Derivatives of the residual in the site coordinates, `l x N`.
    pub fn site_jacobian_at<T: Scalar>(&self, z: &[T], t: &[T]) -> Result<Matrix<T>> {
        self.check_poles_at(z, t)?;
        Ok((0..t.len())
            .map(|i| {
                z.iter()
                    .enumerate()
                    .map(|(s, zs)| {
                        let d = t[i].clone() - zs.clone();
                        -(T::from_rational(&self.site_pairing[self.colours[i]][s]) / (d.clone() * d))
                    })
                    .collect()
            })
            .collect())
    }

    /// Determinant of the Hessian of the log master function.
    pub fn master_hessian_det<T: Scalar>(&self, t: &[T]) -> Result<T> {
        Ok(determinant(&self.jacobian(t)?))
    }

    /// Eigenvalues of `H_1, ..., H_N` on the Bethe vector:
    /// `sum_{j != i} (lambda^i, lambda^j) / (z_i - z_j)
    ///  + sum_k (lambda^i, alpha_{c(k)}) / (t_k - z_i)`.
    pub fn eigenvalues<T: Scalar>(&self, t: &[T]) -> Result<Vec<T>> {
        self.check_poles(t)?;
        let z = self.z_as::<T>()?;
        let ps = self.parity_sequence();
        let sites = self.chain.sites();
        let mut out = Vec::with_capacity(sites.len());
        for i in 0..sites.len() {
            let mut e = T::zero();
            for j in 0..sites.len() {
                if j != i {
                    let p = weight_inner(ps, sites[i].module.hw_weight(), sites[j].module.hw_weight())?;
                    if !p.is_zero() {
                        e = e + T::from_rational(&p) / (z[i].clone() - z[j].clone());
                    }
                }
            }
            for (k, tk) in t.iter().enumerate() {
                let p = &self.site_pairing[self.colours[k]][i];
                if !p.is_zero() {
                    e = e + T::from_rational(p) / (tk.clone() - z[i].clone());
                }
            }
            out.push(e);
        }
        Ok(out)
    }

    /// The same eigenvalues by the vector-representation formula
    /// `sum_{j != i} 1/(z_i - z_j) + sum_{c(k) = 0} 1/(t_k - z_i)`; only valid
    /// when every site carries the defining module.
    pub fn eigenvalues_vector_rep<T: Scalar>(&self, t: &[T]) -> Result<Vec<T>> {
        if self.chain.sites().iter().any(|s| s.module.kind() != &crate::reps::ModuleKind::Defining) {
            return Err(Error::DimensionMismatch("vector-representation formula needs defining sites".into()));
        }
        self.check_poles(t)?;
        let z = self.z_as::<T>()?;
        let n = z.len();
        Ok((0..n)
            .map(|i| {
                let mut e = T::zero();
                for j in 0..n {
                    if j != i {
                        e = e + T::one() / (z[i].clone() - z[j].clone());
                    }
                }
                for (k, tk) in t.iter().enumerate() {
                    if self.colours[k] == 0 {
                        e = e + T::one() / (tk.clone() - z[i].clone());
                    }
                }
                e
            })
            .collect())
    }

    /// Sorts each colour class by real then imaginary part.
    pub fn canonicalize(&self, t: &[Complex64]) -> Vec<Complex64> {
        let mut out = t.to_vec();
        let mut start = 0;
        for &n in &self.l {
            out[start..start + n].sort_by(|a, b| {
                a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal).then(
                    a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal),
                )
            });
            start += n;
        }
        out
    }

    /// Equality up to permutations within colours, with a relative tolerance.
    pub fn equivalent(&self, a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        if a.len() != b.len() {
            return false;
        }
        // a greedy matching within each colour avoids sort-order instability
        let mut start = 0;
        for &n in &self.l {
            let mut used = vec![false; n];
            for x in &a[start..start + n] {
                let hit = (0..n).find(|&j| !used[j] && (x - b[start + j]).norm() <= tol * x.norm().max(1.0));
                match hit {
                    Some(j) => used[j] = true,
                    None => return false,
                }
            }
            start += n;
        }
        true
    }

    /// Roots grouped by colour.
    pub fn by_colour<T: Clone>(&self, t: &[T]) -> Vec<Vec<T>> {
        let mut out = Vec::new();
        let mut start = 0;
        for &n in &self.l {
            out.push(t[start..start + n].to_vec());
            start += n;
        }
        out
    }

    /// Inverse of [`BetheProblem::by_colour`].
    pub fn from_colour_groups<T: Clone>(&self, groups: &[Vec<T>]) -> Result<Vec<T>> {
        if groups.len() != self.l.len() || groups.iter().zip(&self.l).any(|(g, &n)| g.len() != n) {
            return Err(Error::DimensionMismatch("root groups do not match the colour counts".into()));
        }
        Ok(groups.iter().flatten().cloned().collect())
    }
}
