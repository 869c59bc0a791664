use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

/// `T(V)/(R)` for a finite-dimensional `V` with basis `generators` and
/// `R ⊂ V⊗V`. Relation rows use column index `i·g + j` for `e_i⊗e_j` and
/// are kept in reduced row echelon form, so two presentations with the same
/// relation space compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticPresentation<F: Field> {
    field: F,
    generators: Vec<String>,
    relations: Matrix<F>,
}

impl<F: Field> QuadraticPresentation<F> {
    pub fn new(field: F, generators: Vec<String>, relations: Matrix<F>) -> Result<Self> {
        let g = generators.len();
        if g == 0 {
            return Err(Error::Parse("a presentation needs at least one generator".into()));
        }
        if relations.cols() != g * g {
            return Err(Error::DimensionMismatch(format!(
                "relations must have {} columns for {g} generators, found {}",
                g * g,
                relations.cols()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &generators {
            if !seen.insert(name) {
                return Err(Error::Parse(format!("duplicate generator name {name:?}")));
            }
        }
        Ok(QuadraticPresentation { relations: relations.row_basis(), field, generators })
    }

    /// Convenience constructor from integer coefficient rows.
    pub fn from_i64(field: F, generators: &[&str], relations: &[&[i64]]) -> Result<Self> {
        let g = generators.len();
        let rows = relations
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        let m = Matrix::from_rows(field.clone(), g * g, rows)?;
        Self::new(field, generators.iter().map(|s| s.to_string()).collect(), m)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn generators(&self) -> &[String] {
        &self.generators
    }
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }
    pub fn relations(&self) -> &Matrix<F> {
        &self.relations
    }
    pub fn relation_dim(&self) -> usize {
        self.relations.rows()
    }

    /// Coefficient of `e_i⊗e_j` in relation `r`.
    pub fn coeff(&self, r: usize, i: usize, j: usize) -> &F::Elem {
        self.relations.get(r, i * self.num_generators() + j)
    }

    /// The Koszul dual `T(V′)/(R⊥)`, with `R⊥` the annihilator of `R` under
    /// `⟨a⊗b, x⊗y⟩ = a(x)·b(y)`. Generator names gain a trailing prime, or
    /// lose one, so that dualizing twice restores the names.
    pub fn koszul_dual(&self) -> Self {
        let perp = self.relations.kernel_basis();
        let names = self.generators.iter().map(|n| toggle_prime(n)).collect();
        QuadraticPresentation { relations: perp.row_basis(), field: self.field.clone(), generators: names }
    }

    /// Presentation of the opposite algebra: `e_i⊗e_j ↦ e_j⊗e_i` on relations.
    pub fn opposite(&self) -> Self {
        let g = self.num_generators();
        let perm: Vec<usize> = (0..g * g).map(|c| (c % g) * g + c / g).collect();
        let flipped = self.relations.select_cols(&perm);
        QuadraticPresentation {
            relations: flipped.row_basis(),
            field: self.field.clone(),
            generators: self.generators.clone(),
        }
    }

    /// The algebra that acts on the finite side of the BGG functors: the
    /// opposite of the Koszul dual. For presentations stable under the flip
    /// `e_i⊗e_j ↦ e_j⊗e_i` (polynomial and exterior algebras among them) it
    /// coincides with [`Self::koszul_dual`].
    pub fn bgg_dual(&self) -> Self {
        self.koszul_dual().opposite()
    }

    /// Equality of relation spaces, ignoring generator names.
    pub fn same_relations(&self, other: &Self) -> bool {
        self.num_generators() == other.num_generators() && self.relations == other.relations
    }

    /// Free algebra on `g` generators.
    pub fn free(field: F, g: usize) -> Self {
        let m = Matrix::zeros(field.clone(), 0, g * g);
        Self::new(field, numbered("x", g), m).expect("well-formed free presentation")
    }

    /// Commutative polynomial ring in `g` variables `x1..xg`.
    pub fn polynomial(field: F, g: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..g {
            for j in i + 1..g {
                let mut r = vec![field.zero(); g * g];
                r[i * g + j] = field.one();
                r[j * g + i] = field.neg(&field.one());
                rows.push(r);
            }
        }
        let m = Matrix::from_rows(field.clone(), g * g, rows).expect("square rows");
        Self::new(field, numbered("x", g), m).expect("well-formed polynomial presentation")
    }

    /// Exterior algebra on `g` generators `Y1..Yg`.
    pub fn exterior(field: F, g: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..g {
            let mut r = vec![field.zero(); g * g];
            r[i * g + i] = field.one();
            rows.push(r);
            for j in i + 1..g {
                let mut r = vec![field.zero(); g * g];
                r[i * g + j] = field.one();
                r[j * g + i] = field.one();
                rows.push(r);
            }
        }
        let m = Matrix::from_rows(field.clone(), g * g, rows).expect("square rows");
        Self::new(field, numbered("Y", g), m).expect("well-formed exterior presentation")
    }

    /// `k⟨x,y⟩/(xy − q·yx)`.
    pub fn quantum_plane(field: F, q: F::Elem) -> Self {
        let mut r = vec![field.zero(); 4];
        r[1] = field.one();
        r[2] = field.neg(&q);
        let m = Matrix::from_rows(field.clone(), 4, vec![r]).expect("square rows");
        Self::new(field, vec!["x".into(), "y".into()], m).expect("well-formed quantum plane")
    }

    /// Three-dimensional Sklyanin-type algebra with relations
    /// `a·yz + b·zy + c·x²`, `a·zx + b·xz + c·y²`, `a·xy + b·yx + c·z²`.
    pub fn sklyanin(field: F, a: F::Elem, b: F::Elem, c: F::Elem) -> Self {
        let idx = |i: usize, j: usize| i * 3 + j;
        let mut rows = Vec::new();
        for (i, j, k) in [(1, 2, 0), (2, 0, 1), (0, 1, 2)] {
            let mut r = vec![field.zero(); 9];
            r[idx(i, j)] = field.add(&r[idx(i, j)], &a);
            r[idx(j, i)] = field.add(&r[idx(j, i)], &b);
            r[idx(k, k)] = field.add(&r[idx(k, k)], &c);
            rows.push(r);
        }
        let m = Matrix::from_rows(field.clone(), 9, rows).expect("square rows");
        let names = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        Self::new(field, names, m).expect("well-formed Sklyanin presentation")
    }
}

fn numbered(prefix: &str, g: usize) -> Vec<String> {
    (1..=g).map(|i| format!("{prefix}{i}")).collect()
}

fn toggle_prime(name: &str) -> String {
    match name.strip_suffix('\'') {
        Some(base) => base.to_string(),
        None => format!("{name}'"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};
    use proptest::prelude::*;

    #[test]
    fn polynomial_dual_is_exterior() {
        for g in 2..=4 {
            let dual = QuadraticPresentation::polynomial(Rationals, g).koszul_dual();
            assert!(dual.same_relations(&QuadraticPresentation::exterior(Rationals, g)));
            assert_eq!(dual.generators()[0], "x1'");
        }
    }

    #[test]
    fn double_dual_restores_input() {
        let p = QuadraticPresentation::sklyanin(PrimeField::new(7).unwrap(), 1, 2, 3);
        let dd = p.koszul_dual().koszul_dual();
        assert_eq!(dd, p);
    }

    #[test]
    fn free_algebra_dual_has_full_relations() {
        let d = QuadraticPresentation::free(Rationals, 3).koszul_dual();
        assert_eq!(d.relation_dim(), 9);
    }

    #[test]
    fn exterior_is_flip_symmetric() {
        let e = QuadraticPresentation::exterior(Rationals, 3);
        assert!(e.opposite().same_relations(&e));
        assert!(e.bgg_dual().same_relations(&e.koszul_dual()));
    }

    #[test]
    fn rejects_bad_shapes() {
        let f = PrimeField::new(5).unwrap();
        assert!(QuadraticPresentation::from_i64(f, &["x", "y"], &[&[1, 0, 0]]).is_err());
        assert!(QuadraticPresentation::from_i64(f, &["x", "x"], &[&[1, 0, 0, 0]]).is_err());
    }

    proptest! {
        #[test]
        fn dual_dimensions_complement(rows in proptest::collection::vec(proptest::collection::vec(0u32..5, 9), 0..6)) {
            let f = PrimeField::new(5).unwrap();
            let m = Matrix::from_rows(f, 9, rows).unwrap();
            let p = QuadraticPresentation::new(f, vec!["a".into(), "b".into(), "c".into()], m).unwrap();
            prop_assert_eq!(p.relation_dim() + p.koszul_dual().relation_dim(), 9);
            prop_assert!(p.koszul_dual().koszul_dual().same_relations(&p));
        }
    }
}
