use super::{DiscreteFunction, GaussLegendre, LoadSpec, Mesh1D};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::linalg::Tridiagonal;
use crate::scalar::{abs_pow, Real};

pub const DEFAULT_QUADRATURE_ORDER: usize = 4;

/// Floor applied to vanishing block norms while assembling the tangent.
pub const TANGENT_NORM_FLOOR: f64 = 1e-12;

/// Element loop for a fixed family, mesh and quadrature rule.
///
/// `ξ = (U(x), U'(x))` at every quadrature point; the family must have `n = 1`.
#[derive(Debug, Clone)]
pub struct Assembler<'a, T> {
    spec: &'a FamilySpec<T>,
    mesh: Mesh1D,
    quad: GaussLegendre<T>,
}

impl<'a, T: Real> Assembler<'a, T> {
    pub fn new(spec: &'a FamilySpec<T>, mesh: Mesh1D, quadrature_order: usize) -> Result<Self> {
        if spec.n() != 1 {
            return Err(Error::InvalidArgument(format!(
                "1-D assembly needs a family with n = 1, got n = {}",
                spec.n()
            )));
        }
        if quadrature_order < 2 {
            return Err(Error::InvalidArgument(format!(
                "quadrature order must be ≥ 2, got {quadrature_order}"
            )));
        }
        Ok(Self {
            spec,
            mesh,
            quad: GaussLegendre::new(quadrature_order)?,
        })
    }

    pub fn mesh(&self) -> Mesh1D {
        self.mesh
    }

    pub fn spec(&self) -> &FamilySpec<T> {
        self.spec
    }

    fn check_len(&self, values: &[T]) -> Result<()> {
        if values.len() != self.mesh.interior_count() {
            return Err(Error::DimensionMismatch {
                expected: self.mesh.interior_count(),
                got: values.len(),
            });
        }
        Ok(())
    }

    /// Endpoint values of element `e` (boundary nodes are zero).
    fn element_values(values: &[T], e: usize, m: usize) -> (T, T) {
        let left = if e == 0 { T::zero() } else { values[e - 1] };
        let right = if e + 1 == m { T::zero() } else { values[e] };
        (left, right)
    }

    /// Scatters a local 2-vector into interior numbering.
    fn scatter(out: &mut [T], e: usize, m: usize, local: [T; 2]) {
        if e > 0 {
            out[e - 1] = out[e - 1] + local[0];
        }
        if e + 1 < m {
            out[e] = out[e] + local[1];
        }
    }

    /// `⟨A(U), φ_j⟩` for every interior hat function.
    pub fn apply_operator(&self, values: &[T]) -> Result<Vec<T>> {
        self.check_len(values)?;
        let m = self.mesh.elements();
        let h: T = self.mesh.h();
        let mut out = vec![T::zero(); m - 1];
        let mut a = [T::zero(); 2];
        for e in 0..m {
            let (ul, ur) = Self::element_values(values, e, m);
            let slope = (ur - ul) / h;
            let mut local = [T::zero(); 2];
            for (t, w) in self.quad.iter() {
                let u = ul * (T::one() - t) + ur * t;
                self.spec.coefficients_into(&[u, slope], &mut a);
                local[0] = local[0] + w * (-a[1] + h * a[0] * (T::one() - t));
                local[1] = local[1] + w * (a[1] + h * a[0] * t);
            }
            Self::scatter(&mut out, e, m, local);
        }
        Ok(out)
    }

    /// `⟨F, φ_j⟩` by the same quadrature.
    pub fn load_vector(&self, load: &LoadSpec<T>) -> Result<Vec<T>> {
        load.validate()?;
        let m = self.mesh.elements();
        let h: T = self.mesh.h();
        let mut out = vec![T::zero(); m - 1];
        for e in 0..m {
            let x0: T = self.mesh.node(e);
            let mut local = [T::zero(); 2];
            for (t, w) in self.quad.iter() {
                let f = load.eval(x0 + h * t);
                local[0] = local[0] + w * h * f * (T::one() - t);
                local[1] = local[1] + w * h * f * t;
            }
            Self::scatter(&mut out, e, m, local);
        }
        Ok(out)
    }

    /// `⟨A(U), φ_j⟩ − load_j`.
    pub fn residual(&self, values: &[T], load: &[T]) -> Result<Vec<T>> {
        let mut r = self.apply_operator(values)?;
        for (ri, &li) in r.iter_mut().zip(load) {
            *ri = *ri - li;
        }
        Ok(r)
    }

    /// Galerkin matrix of the linearized operator at `U`; tridiagonal.
    pub fn tangent(&self, values: &[T]) -> Result<Tridiagonal<T>> {
        self.check_len(values)?;
        let m = self.mesh.elements();
        let h: T = self.mesh.h();
        let floor = T::of(TANGENT_NORM_FLOOR);
        let mut k = Tridiagonal::zeros(m - 1);
        for e in 0..m {
            let (ul, ur) = Self::element_values(values, e, m);
            let slope = (ur - ul) / h;
            let mut local = [[T::zero(); 2]; 2];
            for (t, w) in self.quad.iter() {
                let u = ul * (T::one() - t) + ur * t;
                let jac = self.spec.eval_jacobian_floored(&[u, slope], floor)?;
                let psi = [T::one() - t, t];
                let dpsi = [-T::one() / h, T::one() / h];
                for (a, row) in local.iter_mut().enumerate() {
                    for (b, entry) in row.iter_mut().enumerate() {
                        let integrand = jac[(0, 0)] * psi[b] * psi[a]
                            + jac[(0, 1)] * dpsi[b] * psi[a]
                            + jac[(1, 0)] * psi[b] * dpsi[a]
                            + jac[(1, 1)] * dpsi[b] * dpsi[a];
                        *entry = *entry + w * h * integrand;
                    }
                }
            }
            // local (a, b) → global (e − 1 + a, e − 1 + b) for interior nodes
            let idx = |a: usize| -> Option<usize> {
                let node = e + a;
                (node >= 1 && node < m).then(|| node - 1)
            };
            for a in 0..2 {
                for b in 0..2 {
                    if let (Some(i), Some(j)) = (idx(a), idx(b)) {
                        if i == j {
                            k.diag[i] = k.diag[i] + local[a][b];
                        } else if j == i + 1 {
                            k.upper[i] = k.upper[i] + local[a][b];
                        } else {
                            k.lower[j] = k.lower[j] + local[a][b];
                        }
                    }
                }
            }
        }
        Ok(k)
    }

    /// `∫ |U|^p + |U'|^p dx` by the configured quadrature.
    pub fn wp_norm_pow(&self, values: &[T], p: T) -> Result<T> {
        self.check_len(values)?;
        wp_norm_pow_with(&self.quad, self.mesh, values, p)
    }
}

fn wp_norm_pow_with<T: Real>(quad: &GaussLegendre<T>, mesh: Mesh1D, values: &[T], p: T) -> Result<T> {
    let m = mesh.elements();
    let h: T = mesh.h();
    let mut total = T::zero();
    for e in 0..m {
        let (ul, ur) = Assembler::<T>::element_values(values, e, m);
        let slope_term = abs_pow((ur - ul) / h, p);
        for (t, w) in quad.iter() {
            let u = ul * (T::one() - t) + ur * t;
            total = total + w * h * (abs_pow(u, p) + slope_term);
        }
    }
    Ok(total)
}

/// `∫ |U|^p + |U'|^p dx` with the default quadrature order.
pub fn wp_norm_pow<T: Real>(u: &DiscreteFunction<T>, p: T) -> Result<T> {
    if !(p >= T::of(2.0)) {
        return Err(Error::InvalidArgument(format!("p must be ≥ 2, got {p}")));
    }
    let quad = GaussLegendre::new(DEFAULT_QUADRATURE_ORDER)?;
    wp_norm_pow_with(&quad, u.mesh(), u.values(), p)
}

/// `(∫ |U|^p + |U'|^p dx)^{1/p}`.
pub fn wp_norm<T: Real>(u: &DiscreteFunction<T>, p: T) -> Result<T> {
    Ok(wp_norm_pow(u, p)?.powf(T::one() / p))
}

/// `⟨A(U), φ_j⟩ − ⟨F, φ_j⟩` with the default quadrature order.
pub fn assemble_residual<T: Real>(
    spec: &FamilySpec<T>,
    u: &DiscreteFunction<T>,
    load: &LoadSpec<T>,
) -> Result<Vec<T>> {
    let asm = Assembler::new(spec, u.mesh(), DEFAULT_QUADRATURE_ORDER)?;
    let f = asm.load_vector(load)?;
    asm.residual(u.values(), &f)
}

/// Tangent matrix with the default quadrature order.
pub fn assemble_tangent<T: Real>(spec: &FamilySpec<T>, u: &DiscreteFunction<T>) -> Result<Tridiagonal<T>> {
    Assembler::new(spec, u.mesh(), DEFAULT_QUADRATURE_ORDER)?.tangent(u.values())
}

/// Consistent piecewise-linear mass matrix: `2h/3` on the diagonal, `h/6` off it.
pub fn mass_matrix<T: Real>(mesh: Mesh1D) -> Tridiagonal<T> {
    let n = mesh.interior_count();
    let h: T = mesh.h();
    Tridiagonal {
        lower: vec![h / T::of(6.0); n - 1],
        diag: vec![T::of(2.0) * h / T::of(3.0); n],
        upper: vec![h / T::of(6.0); n - 1],
    }
}
