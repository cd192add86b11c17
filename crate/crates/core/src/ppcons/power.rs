use serde::Serialize;

use super::formula::{Atom, PpFormula, Term};
use crate::digraph::Digraph;
use crate::homsearch::{find_hom, is_core, SearchBudget};
use crate::unionfind::UnionFind;
use crate::{tuples, Error, Limits, Result};

/// A pp power `H^φ` on `V(H)^d`, vertices indexed in mixed radix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PpPower {
    pub graph: Digraph,
    pub dim: usize,
    pub base: usize,
    /// The formula fixes constants but `H` is not known to be a core, so the
    /// power need not be pp-constructible from `H`.
    pub constants_on_noncore: bool,
}

/// The formula's variables glued along its equality atoms. Edge atoms
/// become edges of `shape`; constant atoms pin classes.
struct Skeleton {
    shape: Digraph,
    x_class: Vec<usize>,
    y_class: Vec<usize>,
    pinned: Vec<Option<usize>>,
    /// Classes of y variables that meet neither an x variable nor a
    /// constant, in order of first y coordinate.
    free_y: Vec<usize>,
}

impl Skeleton {
    /// `None` when the atoms alone are contradictory.
    fn new(phi: &PpFormula) -> Result<Option<Skeleton>> {
        if phi.has_false() {
            return Ok(None);
        }
        let total = phi.variable_count();
        let mut uf = UnionFind::new(total);
        for atom in phi.atoms() {
            if let Atom::Eq(s, t) = *atom {
                uf.union(phi.slot(s), phi.slot(t));
            }
        }
        let mut class_of_root = vec![usize::MAX; total];
        let mut class = vec![0; total];
        let mut classes = 0;
        for (slot, c) in class.iter_mut().enumerate() {
            let r = uf.find(slot);
            if class_of_root[r] == usize::MAX {
                class_of_root[r] = classes;
                classes += 1;
            }
            *c = class_of_root[r];
        }
        let of = |t: Term| class[phi.slot(t)];

        let mut pinned = vec![None; classes];
        let mut edges = Vec::new();
        for atom in phi.atoms() {
            match *atom {
                Atom::Edge(s, t) => edges.push((of(s), of(t))),
                Atom::Const(t, c) => match pinned[of(t)] {
                    Some(old) if old != c => return Ok(None),
                    _ => pinned[of(t)] = Some(c),
                },
                Atom::Eq(..) | Atom::False => {}
            }
        }
        let d = phi.dim();
        let x_class: Vec<usize> = (0..d).map(|i| of(Term::X(i))).collect();
        let y_class: Vec<usize> = (0..d).map(|i| of(Term::Y(i))).collect();
        let mut free_y = Vec::new();
        for &c in &y_class {
            if pinned[c].is_none() && !x_class.contains(&c) && !free_y.contains(&c) {
                free_y.push(c);
            }
        }
        Ok(Some(Skeleton {
            shape: Digraph::new(classes, edges)?,
            x_class,
            y_class,
            pinned,
            free_y,
        }))
    }

    fn extends(&self, h: &Digraph, fixed: &[Option<usize>], budget: &SearchBudget) -> Result<bool> {
        let pins: Vec<(usize, usize)> = fixed
            .iter()
            .enumerate()
            .filter_map(|(c, v)| v.map(|v| (c, v)))
            .collect();
        Ok(find_hom(&self.shape, h, &pins, budget)?.is_some())
    }
}

/// Evaluates `φ` over `h`: `u -> v` is an edge iff `φ(u, v)` holds.
///
/// For each source tuple the x classes are pinned, then the free y classes
/// are assigned one at a time, each partial assignment checked for an
/// extension to all remaining variables by the homomorphism solver.
pub fn pp_power(h: &Digraph, phi: &PpFormula, limits: &Limits) -> Result<PpPower> {
    let n = h.vertex_count();
    for atom in phi.atoms() {
        if let Atom::Const(_, c) = *atom {
            if c >= n {
                return Err(Error::ConstantOutOfRange { constant: c, n });
            }
        }
    }
    let d = phi.dim();
    let size = limits.check_vertices("pp power", tuples::count(n, d))?;
    let constants_on_noncore =
        phi.has_constants() && !matches!(is_core(h, &limits.search), Ok(true));
    let done = |edges: Vec<(usize, usize)>| -> Result<PpPower> {
        Ok(PpPower {
            graph: Digraph::new(size, edges)?,
            dim: d,
            base: n,
            constants_on_noncore,
        })
    };

    let Some(sk) = Skeleton::new(phi)? else {
        return done(Vec::new());
    };
    if !sk.extends(h, &sk.pinned, &limits.search)? {
        return done(Vec::new());
    }

    let mut edges = Vec::new();
    let mut u = vec![0; d];
    let mut v = vec![0; d];
    loop {
        let mut fixed = sk.pinned.clone();
        let consistent = sk.x_class.iter().zip(&u).all(|(&c, &val)| match fixed[c] {
            Some(old) => old == val,
            None => {
                fixed[c] = Some(val);
                true
            }
        });
        if consistent && sk.extends(h, &fixed, &limits.search)? {
            let from = tuples::index(&u, n);
            let mut emit = |fixed: &[Option<usize>]| -> Result<()> {
                for (slot, &c) in v.iter_mut().zip(&sk.y_class) {
                    *slot = fixed[c].expect("every y class is fixed at a leaf");
                }
                edges.push((from, tuples::index(&v, n)));
                limits.check_edges("pp power edges", edges.len() as u128)?;
                Ok(())
            };
            assign_free(&sk, h, &mut fixed, 0, &limits.search, &mut emit)?;
        }
        if !tuples::advance(&mut u, n) {
            break;
        }
    }
    done(edges)
}

/// Depth-first over the free y classes; `fixed` is known to extend.
fn assign_free(
    sk: &Skeleton,
    h: &Digraph,
    fixed: &mut [Option<usize>],
    depth: usize,
    budget: &SearchBudget,
    emit: &mut dyn FnMut(&[Option<usize>]) -> Result<()>,
) -> Result<()> {
    let Some(&c) = sk.free_y.get(depth) else {
        return emit(fixed);
    };
    for val in 0..h.vertex_count() {
        fixed[c] = Some(val);
        if sk.extends(h, fixed, budget)? {
            assign_free(sk, h, fixed, depth + 1, budget, emit)?;
        }
    }
    fixed[c] = None;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{cycle, path, t3};
    use crate::homsearch::hom_equivalent;

    fn power(h: &Digraph, text: &str) -> PpPower {
        pp_power(h, &text.parse().unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn falsum_gives_edgeless() {
        let p = power(&cycle(4), "d=1; false");
        assert_eq!(p.graph.vertex_count(), 4);
        assert_eq!(p.graph.edge_count(), 0);
    }

    #[test]
    fn equality_gives_all_loops() {
        let p = power(&path(3), "d=1; x1=y1");
        assert_eq!(
            p.graph.edges().collect::<Vec<_>>(),
            vec![(0, 0), (1, 1), (2, 2)]
        );
        let c1 = cycle(1);
        assert!(hom_equivalent(&p.graph, &c1, &SearchBudget::default())
            .unwrap()
            .is_some());
    }

    #[test]
    fn constants_single_out_one_edge() {
        let p = power(&t3(), "d=1; x1=c0 & y1=c1");
        assert_eq!(p.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(!p.constants_on_noncore);
        let u = crate::digraph::disjoint_union(&[cycle(6), cycle(3)]).unwrap();
        let q = power(&u, "d=1; x1=c0 & y1=c1");
        assert!(q.constants_on_noncore);
    }

    #[test]
    fn square_of_edge_relation() {
        // E(x,e0) & E(e0,y) over C_4 is the two-step relation
        let p = power(&cycle(4), "d=1; exists 1; E(x1,e0) & E(e0,y1)");
        assert_eq!(
            p.graph.edges().collect::<Vec<_>>(),
            vec![(0, 2), (1, 3), (2, 0), (3, 1)]
        );
    }

    #[test]
    fn coordinates_mixed_radix() {
        // d=2 over P2: (x1,x2) -> (y1,y2) iff x1 -> y1 and x2 = y2
        let p = power(&path(2), "d=2; E(x1,y1) & x2=y2");
        assert_eq!(p.graph.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn unconstrained_target_coordinates() {
        let p = power(&path(2), "d=1; true");
        assert_eq!(p.graph.edge_count(), 4);
        let q = power(&path(2), "d=2; E(x1,y2)");
        // x1 = 0, y2 = 1, x2 and y1 free
        assert_eq!(q.graph.edge_count(), 4);
        assert!(q.graph.has_edge(1, 3));
    }

    #[test]
    fn contradictions() {
        assert_eq!(power(&path(3), "d=1; x1=c0 & x1=c1").graph.edge_count(), 0);
        assert_eq!(power(&path(3), "d=1; E(x1,x1)").graph.edge_count(), 0);
        assert_eq!(
            power(&path(3), "d=1; x1=y1 & E(x1,y1)").graph.edge_count(),
            0
        );
    }

    #[test]
    fn errors() {
        let phi: PpFormula = "d=1; x1=c5".parse().unwrap();
        assert!(matches!(
            pp_power(&path(3), &phi, &Limits::default()),
            Err(Error::ConstantOutOfRange { constant: 5, n: 3 })
        ));
        let big: PpFormula = "d=30; true".parse().unwrap();
        assert!(matches!(
            pp_power(&path(2), &big, &Limits::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
