//! Floating point oracle built from Gelfand-Tsetlin matrix elements.
//!
//! Shares no code path with the exact engine beyond label types: generators
//! come from the textbook GT formulas, multiplicity spaces from an SVD null
//! space, and SU(2) Clebsch-Gordan coefficients from the Racah sum in `f64`.

use nalgebra::DMatrix;

use su3_rwc_core::engine::RwcTable;
use su3_rwc_core::labels::{lr_multiplicity, Partition3};

/// Singular values below this count as zero when extracting null spaces.
const NULL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GtPattern {
    pub top: [i64; 3],
    pub mid: [i64; 2],
    pub bot: i64,
}

impl GtPattern {
    /// Diagonal of `E_11, E_22, E_33`.
    pub fn weight(&self) -> [i64; 3] {
        let s2 = self.mid[0] + self.mid[1];
        [self.bot, s2 - self.bot, self.top.iter().sum::<i64>() - s2]
    }
}

pub fn gt_basis(p: Partition3) -> Vec<GtPattern> {
    let [m1, m2, m3] = p.m;
    let mut out = Vec::new();
    for q1 in (m2..=m1).rev() {
        for q2 in (m3..=m2).rev() {
            for b in (q2..=q1).rev() {
                out.push(GtPattern { top: p.m, mid: [q1, q2], bot: b });
            }
        }
    }
    out
}

/// `e[i][j]` is the matrix of `E_{i+1, j+1}` in the orthonormal GT basis.
pub struct GtGenerators {
    pub basis: Vec<GtPattern>,
    pub e: [[DMatrix<f64>; 3]; 3],
}

fn index_of(basis: &[GtPattern], p: &GtPattern) -> Option<usize> {
    basis.iter().position(|b| b == p)
}

pub fn gt_generator_matrices(p: Partition3) -> GtGenerators {
    let basis = gt_basis(p);
    let n = basis.len();
    let zero = || DMatrix::<f64>::zeros(n, n);
    let mut e = [[zero(), zero(), zero()], [zero(), zero(), zero()], [zero(), zero(), zero()]];
    for (c, pat) in basis.iter().enumerate() {
        let w = pat.weight();
        for i in 0..3 {
            e[i][i][(c, c)] = w[i] as f64;
        }
        // E_12 raises the bottom entry.
        let mut up = *pat;
        up.bot += 1;
        if let Some(r) = index_of(&basis, &up) {
            let v = ((pat.mid[0] - pat.bot) * (pat.bot - pat.mid[1] + 1)) as f64;
            e[0][1][(r, c)] = v.sqrt();
        }
        // E_23 raises one entry of the middle row.
        let l3: Vec<f64> = (0..3).map(|i| (pat.top[i] - i as i64 - 1) as f64).collect();
        let l2: Vec<f64> = (0..2).map(|i| (pat.mid[i] - i as i64 - 1) as f64).collect();
        let l1 = (pat.bot - 1) as f64;
        for j in 0..2 {
            let mut up = *pat;
            up.mid[j] += 1;
            let Some(r) = index_of(&basis, &up) else { continue };
            let mut num = -1.0;
            for &x in &l3 {
                num *= x - l2[j];
            }
            num *= l1 - l2[j] - 1.0;
            let mut den = 1.0;
            for (i, &x) in l2.iter().enumerate() {
                if i != j {
                    den *= (x - l2[j]) * (x - l2[j] - 1.0);
                }
            }
            let v = num / den;
            if v > 0.0 {
                e[1][2][(r, c)] = v.sqrt();
            }
        }
    }
    e[1][0] = e[0][1].transpose();
    e[2][1] = e[1][2].transpose();
    e[0][2] = &e[0][1] * &e[1][2] - &e[1][2] * &e[0][1];
    e[2][0] = e[0][2].transpose();
    GtGenerators { basis, e }
}

/// Largest deviation from `[E_ij, E_kl] = d_jk E_il - d_il E_kj`.
pub fn commutator_defect(g: &GtGenerators) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let lhs = &g.e[i][j] * &g.e[k][l] - &g.e[k][l] * &g.e[i][j];
                    let mut rhs = DMatrix::zeros(lhs.nrows(), lhs.ncols());
                    if j == k {
                        rhs += &g.e[i][l];
                    }
                    if i == l {
                        rhs -= &g.e[k][j];
                    }
                    worst = worst.max((lhs - rhs).amax());
                }
            }
        }
    }
    worst
}

/// Quadratic Casimir `sum E_ij E_ji`.
pub fn casimir(g: &GtGenerators) -> DMatrix<f64> {
    let n = g.basis.len();
    let mut c = DMatrix::zeros(n, n);
    for i in 0..3 {
        for j in 0..3 {
            c += &g.e[i][j] * &g.e[j][i];
        }
    }
    c
}

struct Product {
    left: GtGenerators,
    right: GtGenerators,
}

impl Product {
    fn new(left: Partition3, right: Partition3) -> Self {
        Product { left: gt_generator_matrices(left), right: gt_generator_matrices(right) }
    }

    fn dim(&self) -> usize {
        self.left.basis.len() * self.right.basis.len()
    }

    fn index(&self, a: usize, b: usize) -> usize {
        a * self.right.basis.len() + b
    }

    fn generator(&self, i: usize, j: usize) -> DMatrix<f64> {
        let il = DMatrix::<f64>::identity(self.left.basis.len(), self.left.basis.len());
        let ir = DMatrix::<f64>::identity(self.right.basis.len(), self.right.basis.len());
        self.left.e[i][j].kronecker(&ir) + il.kronecker(&self.right.e[i][j])
    }

    /// Product states of the given weight.
    fn weight_states(&self, w: [i64; 3]) -> Vec<usize> {
        let mut out = Vec::new();
        for (a, pa) in self.left.basis.iter().enumerate() {
            for (b, pb) in self.right.basis.iter().enumerate() {
                let (x, y) = (pa.weight(), pb.weight());
                if (0..3).all(|k| x[k] + y[k] == w[k]) {
                    out.push(self.index(a, b));
                }
            }
        }
        out
    }
}

/// Orthonormal basis (columns) of the highest weight vectors of `target`
/// inside `left x right`, or an error when its dimension disagrees with the
/// tableau count.
pub fn highest_weight_multiplicity_space(
    left: Partition3,
    right: Partition3,
    target: Partition3,
) -> Result<DMatrix<f64>, String> {
    let prod = Product::new(left, right);
    hw_space(&prod, left, right, target)
}

fn hw_space(prod: &Product, left: Partition3, right: Partition3, target: Partition3) -> Result<DMatrix<f64>, String> {
    let n = prod.dim();
    let expected = lr_multiplicity(left.su3(), right.su3(), target) as usize;
    if target.boxes() != left.boxes() + right.boxes() {
        return if expected == 0 { Ok(DMatrix::zeros(n, 0)) } else { Err("box mismatch".into()) };
    }
    let states = prod.weight_states(target.m);
    if states.is_empty() {
        return if expected == 0 { Ok(DMatrix::zeros(n, 0)) } else { Err(format!("no states of weight {target}")) };
    }
    let raise = [prod.generator(0, 1), prod.generator(1, 2)];
    let mut a = DMatrix::zeros(2 * n, states.len());
    for (col, &s) in states.iter().enumerate() {
        for (k, r) in raise.iter().enumerate() {
            for row in 0..n {
                a[(k * n + row, col)] = r[(row, s)];
            }
        }
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t.ok_or("SVD did not return right singular vectors")?;
    let null: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] < NULL_TOL).collect();
    if null.len() != expected {
        return Err(format!("oracle finds {} copies of {target}, the tableau count is {expected}", null.len()));
    }
    let mut q = DMatrix::zeros(n, null.len());
    for (c, &i) in null.iter().enumerate() {
        for (k, &s) in states.iter().enumerate() {
            q[(s, c)] = vt[(i, k)];
        }
    }
    Ok(q)
}

fn fact(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// SU(2) Clebsch-Gordan coefficient with doubled arguments.
pub fn clebsch_gordan(j1: i64, m1: i64, j2: i64, m2: i64, j: i64, m: i64) -> f64 {
    if m1 + m2 != m || (j1 - j2).abs() > j || j > j1 + j2 || (j1 + j2 + j) % 2 != 0 {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m.abs() > j || (j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i64| x / 2;
    let pre = ((j + 1) as f64 * fact(h(j1 + j2 - j)) * fact(h(j1 - j2 + j)) * fact(h(-j1 + j2 + j))
        / fact(h(j1 + j2 + j) + 1))
    .sqrt()
        * (fact(h(j1 + m1)) * fact(h(j1 - m1)) * fact(h(j2 + m2)) * fact(h(j2 - m2)) * fact(h(j + m)) * fact(h(j - m)))
            .sqrt();
    let mut s = 0.0;
    for k in 0..=h(j1 + j2 - j) {
        let d = [h(j1 + j2 - j) - k, h(j1 - m1) - k, h(j2 + m2) - k, h(j - j2 + m1) + k, h(j - j1 - m2) + k];
        if d.iter().any(|&x| x < 0) {
            continue;
        }
        let t = 1.0 / (fact(k) * d.iter().map(|&x| fact(x)).product::<f64>());
        s += if k % 2 == 0 { t } else { -t };
    }
    pre * s
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub multiplicity: usize,
    pub membership: f64,
    pub orthonormality: f64,
    pub projector: f64,
    pub tol: f64,
}

impl OracleReport {
    pub fn max_residual(&self) -> f64 {
        self.membership.max(self.orthonormality).max(self.projector)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tol
    }
}

/// Highest weight vectors assembled from the table, one column per `eta`.
pub fn coupled_vectors(table: &RwcTable) -> DMatrix<f64> {
    let c = &table.coupling;
    let prod = Product::new(c.left.partition(), c.right.partition());
    coupled(&prod, table)
}

fn coupled(prod: &Product, table: &RwcTable) -> DMatrix<f64> {
    let c = &table.coupling;
    let [m1, m2, _] = c.target.m;
    let mut v = DMatrix::zeros(prod.dim(), c.multiplicity());
    for (r, vals) in &table.rows {
        if r.rho.pair() != [m1, m2] {
            continue;
        }
        let (j1, j2, j) = (r.rho1.two_j(), r.rho2.two_j(), r.rho.two_j());
        for (a, pa) in prod.left.basis.iter().enumerate() {
            if pa.mid != r.rho1.pair() {
                continue;
            }
            for (b, pb) in prod.right.basis.iter().enumerate() {
                if pb.mid != r.rho2.pair() {
                    continue;
                }
                let z1 = 2 * pa.bot - r.rho1.weight();
                let z2 = 2 * pb.bot - r.rho2.weight();
                let cg = clebsch_gordan(j1, z1, j2, z2, j, j);
                if cg == 0.0 {
                    continue;
                }
                for (e, x) in vals.iter().enumerate() {
                    v[(prod.index(a, b), e)] += x.to_f64() * cg;
                }
            }
        }
    }
    v
}

/// Checks that the table's highest weight vectors lie in, are orthonormal
/// in, and span the oracle's multiplicity space.
pub fn oracle_projector_check(table: &RwcTable, tol: f64) -> Result<OracleReport, String> {
    let c = &table.coupling;
    let prod = Product::new(c.left.partition(), c.right.partition());
    let q = hw_space(&prod, c.left.partition(), c.right.partition(), c.target)?;
    let v = coupled(&prod, table);
    let pq = &q * q.transpose();
    let membership = (&v - &pq * &v).amax();
    let gram = v.transpose() * &v;
    let orthonormality = (gram - DMatrix::identity(v.ncols(), v.ncols())).amax();
    let projector = (&v * v.transpose() - pq).amax();
    Ok(OracleReport { multiplicity: q.ncols(), membership, orthonormality, projector, tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_representation() {
        let g = gt_generator_matrices(Partition3::new(1, 0, 0));
        assert_eq!(g.basis.len(), 3);
        assert!(commutator_defect(&g) < 1e-12);
    }

    #[test]
    fn octet_casimir_is_uniform() {
        let g = gt_generator_matrices(Partition3::new(2, 1, 0));
        assert_eq!(g.basis.len(), 8);
        assert!(commutator_defect(&g) < 1e-12);
        let c = casimir(&g);
        let d = c[(0, 0)];
        assert!((c - DMatrix::identity(8, 8) * d).amax() < 1e-12);
    }

    #[test]
    fn bigger_irreps_close_the_algebra() {
        for p in [Partition3::new(3, 1, 0), Partition3::new(4, 2, 1), Partition3::new(4, 4, 0)] {
            assert!(commutator_defect(&gt_generator_matrices(p)) < 1e-11, "{p}");
        }
    }

    #[test]
    fn multiplicity_spaces() {
        let a = Partition3::new(2, 1, 0);
        assert_eq!(highest_weight_multiplicity_space(a, a, Partition3::new(3, 2, 1)).unwrap().ncols(), 2);
        assert_eq!(highest_weight_multiplicity_space(a, a, Partition3::new(2, 2, 2)).unwrap().ncols(), 1);
        assert_eq!(highest_weight_multiplicity_space(a, a, Partition3::new(5, 0, 0)).unwrap().ncols(), 0);
    }

    #[test]
    fn engine_tables_pass() {
        use su3_rwc_core::engine::rwc_table;
        use su3_rwc_core::labels::{Coupling, Su3Irrep};
        let c = Coupling::new(Su3Irrep::new(1, 1), Su3Irrep::new(1, 1), Partition3::new(3, 2, 1)).unwrap().unwrap();
        let r = oracle_projector_check(&rwc_table(&c).unwrap(), 1e-10).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn clebsch_gordan_values() {
        // <1/2 1/2, 1/2 -1/2 | 0 0> = 1/sqrt2
        assert!((clebsch_gordan(1, 1, 1, -1, 0, 0) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((clebsch_gordan(2, 2, 2, 0, 2, 2) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((clebsch_gordan(2, 0, 2, 2, 2, 2) + 0.5f64.sqrt()).abs() < 1e-15);
    }
}
