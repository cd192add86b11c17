use serde::Serialize;

use super::formula::{Atom, PpFormula, Term};
use super::power::pp_power;
use crate::digraph::{path, t3, Digraph};
use crate::homsearch::{core_of, hom_equivalent, is_core, Hom};
use crate::rect::{is_totally_rectangular, RectWitness};
use crate::{tuples, Error, Limits, Result};

/// Longest path `P_k` that `construct_path_formula` will build.
pub const MAX_PATH_CONSTRUCTION: usize = 16;

/// A pp power of `base` shown homomorphically equivalent to `target`.
#[derive(Debug, Clone, Serialize)]
pub struct Construction {
    pub formula: PpFormula,
    /// The digraph the formula is evaluated in.
    pub base: Digraph,
    pub power: Digraph,
    pub target: Digraph,
    /// Homomorphism from the power to the target.
    pub to_target: Hom,
    /// Homomorphism from the target into the power.
    pub from_target: Hom,
    /// Rectangularity failure the construction is built from, if any.
    pub witness: Option<RectWitness>,
}

impl Construction {
    fn certify(
        formula: PpFormula,
        base: Digraph,
        target: Digraph,
        to_target: Vec<usize>,
        from_target: Vec<usize>,
        limits: &Limits,
    ) -> Result<Self> {
        let power = pp_power(&base, &formula, limits)?.graph;
        let to_target = Hom::new(&power, &target, to_target)?;
        let from_target = Hom::new(&target, &power, from_target)?;
        Ok(Construction {
            formula,
            base,
            power,
            target,
            to_target,
            from_target,
            witness: None,
        })
    }
}

/// `φ(x, y) = (x = u) ∧ (y = v)` with `u = 0`, `v = 1`: a single edge, so
/// the power is equivalent to `P_2`.
pub fn construct_p2_from(g: &Digraph, limits: &Limits) -> Result<Construction> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::TooFewVertices { min: 2, got: n });
    }
    if !is_core(g, &limits.search)? {
        return Err(Error::NotACore);
    }
    let formula = PpFormula::new(
        1,
        0,
        vec![Atom::Const(Term::X(0), 0), Atom::Const(Term::Y(0), 1)],
    )?;
    let to_target = (0..n).map(|v| usize::from(v == 1)).collect();
    Construction::certify(formula, g.clone(), path(2), to_target, vec![0, 1], limits)
}

/// `P_k` from `P_2`. For `k ≥ 3` the formula has dimension `k - 1`:
/// `x_i = y_{i+1}` for `i < k - 2` and `E(x_{k-2}, y_0)`, so each edge shifts
/// the tuple right and pushes a 1 in front. `k = 1` uses `false` and
/// `k = 2` the edge relation itself.
pub fn construct_path_formula(k: usize, limits: &Limits) -> Result<Construction> {
    if k == 0 {
        return Err(Error::SizeTooSmall {
            what: "path",
            min: 1,
            got: 0,
        });
    }
    if k > MAX_PATH_CONSTRUCTION {
        return Err(Error::BudgetExceeded {
            what: "path construction length",
            required: k as u128,
            budget: MAX_PATH_CONSTRUCTION as u128,
        });
    }
    match k {
        1 => {
            let formula = PpFormula::new(1, 0, vec![Atom::False])?;
            Construction::certify(formula, path(2), path(1), vec![0, 0], vec![0], limits)
        }
        2 => {
            let formula = PpFormula::new(1, 0, vec![Atom::Edge(Term::X(0), Term::Y(0))])?;
            Construction::certify(formula, path(2), path(2), vec![0, 1], vec![0, 1], limits)
        }
        _ => {
            let d = k - 1;
            let mut atoms: Vec<Atom> = (0..d - 1)
                .map(|i| Atom::Eq(Term::X(i), Term::Y(i + 1)))
                .collect();
            atoms.push(Atom::Edge(Term::X(d - 1), Term::Y(0)));
            let formula = PpFormula::new(d, 0, atoms)?;
            let ones = (0..1usize << d).map(|v| v.count_ones() as usize).collect();
            // j ones followed by zeros
            let walk = (0..k)
                .map(|j| {
                    let t: Vec<usize> = (0..d).map(|i| usize::from(i < j)).collect();
                    tuples::index(&t, 2)
                })
                .collect();
            Construction::certify(formula, path(2), path(k), ones, walk, limits)
        }
    }
}

/// Atoms stating a walk of exactly `k` edges from `from` to `to`, using
/// existentials `E(first)..E(first + k - 2)`.
fn walk_atoms(k: usize, from: Term, to: Term, first: usize) -> Vec<Atom> {
    let mut stops = vec![from];
    stops.extend((0..k - 1).map(|j| Term::E(first + j)));
    stops.push(to);
    stops.windows(2).map(|w| Atom::Edge(w[0], w[1])).collect()
}

/// `T_3` from any digraph whose core is not totally rectangular.
///
/// With the least witness `(k, a, b, c, d)` on the core, the formula is
/// `x_1 →^k y_2 ∧ x_2 = d ∧ y_1 = a` over pairs. `T_3` embeds as
/// `0 ↦ (c, d)`, `1 ↦ (a, d)`, `2 ↦ (a, b)`. Back to `T_3`, vertices with
/// only outgoing edges go to 0, those with only incoming edges to 2, and
/// all others to 1.
pub fn construct_t3_from(g: &Digraph, limits: &Limits) -> Result<Construction> {
    t3_from_core(core_of(g, &limits.search)?.digraph, limits)
}

/// As `construct_t3_from`, for a digraph already known to be a core.
pub(crate) fn t3_from_core(core: Digraph, limits: &Limits) -> Result<Construction> {
    let w = match is_totally_rectangular(&core) {
        Ok(()) => return Err(Error::IsTotallyRectangular),
        Err(w) => w,
    };
    let n = core.vertex_count();
    let mut atoms = walk_atoms(w.k, Term::X(0), Term::Y(1), 0);
    atoms.push(Atom::Const(Term::X(1), w.d));
    atoms.push(Atom::Const(Term::Y(0), w.a));
    let formula = PpFormula::new(2, w.k - 1, atoms)?;

    let power = pp_power(&core, &formula, limits)?.graph;
    let partition = (0..power.vertex_count())
        .map(
            |v| match (power.out_degree(v) > 0, power.in_degree(v) > 0) {
                (true, false) => 0,
                (false, true) => 2,
                _ => 1,
            },
        )
        .collect();
    let embedding = vec![w.c * n + w.d, w.a * n + w.d, w.a * n + w.b];
    let mut c = Construction::certify(formula, core, t3(), partition, embedding, limits)?;
    c.witness = Some(w);
    Ok(c)
}

/// Evaluates `φ` over `h` and looks for homomorphisms both ways between the
/// power and `target`.
pub fn verify_construction(
    h: &Digraph,
    phi: &PpFormula,
    target: &Digraph,
    limits: &Limits,
) -> Result<Option<(Hom, Hom)>> {
    let power = pp_power(h, phi, limits)?;
    hom_equivalent(&power.graph, target, &limits.search)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{clique, cycle};

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn p2_from_cores() {
        let c = construct_p2_from(&t3(), &limits()).unwrap();
        assert_eq!(c.formula.to_string(), "d=1; exists 0; x1=c0 & y1=c1");
        assert_eq!(c.power.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        let c5 = construct_p2_from(&cycle(5), &limits()).unwrap();
        assert_eq!(c5.power.vertex_count(), 5);
        assert_eq!(c5.power.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn p2_from_rejects() {
        assert!(matches!(
            construct_p2_from(&cycle(1), &limits()),
            Err(Error::TooFewVertices { min: 2, got: 1 })
        ));
        let u = crate::digraph::disjoint_union(&[cycle(6), cycle(3)]).unwrap();
        assert!(matches!(
            construct_p2_from(&u, &limits()),
            Err(Error::NotACore)
        ));
    }

    #[test]
    fn paths() {
        let c3 = construct_path_formula(3, &limits()).unwrap();
        assert_eq!(c3.formula.to_string(), "d=2; exists 0; x1=y2 & E(x2,y1)");
        assert_eq!(c3.power.vertex_count(), 4);
        // (0,0) -> (1,0) -> (1,1)
        assert_eq!(c3.from_target.map(), &[0, 2, 3]);
        let c5 = construct_path_formula(5, &limits()).unwrap();
        assert_eq!(c5.power.vertex_count(), 16);
        assert_eq!(c5.from_target.map(), &[0, 8, 12, 14, 15]);
        let c2 = construct_path_formula(2, &limits()).unwrap();
        assert_eq!(c2.power, path(2));
        let c1 = construct_path_formula(1, &limits()).unwrap();
        assert_eq!(c1.power.edge_count(), 0);
    }

    #[test]
    fn path_edges_add_one_one() {
        for k in 3..=8 {
            let c = construct_path_formula(k, &limits()).unwrap();
            for (u, v) in c.power.edges() {
                assert_eq!(v.count_ones(), u.count_ones() + 1, "k={k} edge {u}->{v}");
            }
        }
    }

    #[test]
    fn path_length_limits() {
        assert!(matches!(
            construct_path_formula(17, &limits()),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            construct_path_formula(0, &limits()),
            Err(Error::SizeTooSmall { .. })
        ));
        assert!(construct_path_formula(16, &limits()).is_ok());
    }

    #[test]
    fn t3_from_clique() {
        let c = construct_t3_from(&clique(3), &limits()).unwrap();
        assert_eq!(
            c.witness,
            Some(RectWitness {
                k: 1,
                a: 0,
                b: 1,
                c: 2,
                d: 0
            })
        );
        assert_eq!(c.power.vertex_count(), 9);
        assert_eq!(c.from_target.map(), &[6, 0, 1]);
        assert_eq!(
            c.formula.to_string(),
            "d=2; exists 0; E(x1,y2) & x2=c0 & y1=c0"
        );
    }

    #[test]
    fn t3_from_t3_and_longer_walks() {
        let c = construct_t3_from(&t3(), &limits()).unwrap();
        assert_eq!(
            c.witness,
            Some(RectWitness {
                k: 1,
                a: 1,
                b: 2,
                c: 0,
                d: 1
            })
        );
        // a triangle and a 2-cycle through vertex 0: a core that is
        // 1-rectangular but not 2-rectangular
        let g = Digraph::new(4, [(0, 1), (0, 3), (1, 2), (2, 0), (3, 0)]).unwrap();
        let c = construct_t3_from(&g, &limits()).unwrap();
        assert_eq!(
            c.witness,
            Some(RectWitness {
                k: 2,
                a: 1,
                b: 0,
                c: 0,
                d: 2
            })
        );
        assert_eq!(c.formula.existentials(), 1);
    }

    #[test]
    fn t3_from_rectangular_fails() {
        assert!(matches!(
            construct_t3_from(&cycle(4), &limits()),
            Err(Error::IsTotallyRectangular)
        ));
    }

    #[test]
    fn verification() {
        let c4 = construct_path_formula(4, &limits()).unwrap();
        assert!(
            verify_construction(&path(2), &c4.formula, &path(4), &limits())
                .unwrap()
                .is_some()
        );
        assert!(
            verify_construction(&path(2), &c4.formula, &path(5), &limits())
                .unwrap()
                .is_none()
        );
        let falsum = PpFormula::new(1, 0, vec![Atom::False]).unwrap();
        assert!(verify_construction(&cycle(3), &falsum, &path(1), &limits())
            .unwrap()
            .is_some());
    }
}
