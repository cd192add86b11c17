//! Placement of a digraph at the top of the pp-constructability poset.
//!
//! Every finite digraph is equivalent to `P_1`, equivalent to `P_2`, or
//! strictly below `P_2`. In the last case it lies below `T_3` or below some
//! prime cycle `C_p`. The classifier works on the core:
//!
//! 1. a looped or single-vertex core means `P_1`;
//! 2. a core that is not totally rectangular lies below `T_3`, and the
//!    construction is attached;
//! 3. a totally rectangular core is a path (then `P_2`) or a disjoint union
//!    of cycles, which lies below `C_p` for each prime `p` dividing its
//!    shortest cycle.
//!
//! In cases 2 and 3 every prime `p` up to the bound whose cyclic condition
//! fails on the core is reported as a further upper bound.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::digraph::{shape_of, Digraph, ShapeKind};
use crate::homsearch::core_of;
use crate::minorcond::{satisfies, Builtin};
use crate::ppcons::{t3_from_core, Construction};
use crate::rect::{is_totally_rectangular, RectWitness};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    EquivalentP1,
    EquivalentP2,
    StrictlyBelow,
}

/// Why `C_p` is an upper bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleEvidence {
    /// Outcome of the `Σ_p` check on the core; `None` when it was over budget.
    pub sigma_p: Option<bool>,
    /// Shortest cycle length of the core, when `p` divides it.
    pub divides_shortest_cycle: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum UpperBound {
    T3 {
        witness: RectWitness,
        construction: Box<Construction>,
    },
    Cycle {
        p: usize,
        evidence: CycleEvidence,
    },
}

impl UpperBound {
    pub fn name(&self) -> String {
        match self {
            UpperBound::T3 { .. } => "T3".into(),
            UpperBound::Cycle { p, .. } => format!("C_{p}"),
        }
    }
}

impl Serialize for UpperBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            UpperBound::T3 {
                witness,
                construction,
            } => {
                let mut st = s.serialize_struct("UpperBound", 6)?;
                st.serialize_field("name", "T3")?;
                st.serialize_field("witness", witness)?;
                st.serialize_field("formula", &construction.formula)?;
                st.serialize_field("power", &construction.power)?;
                st.serialize_field("embedding", &construction.from_target)?;
                st.serialize_field("to_t3", &construction.to_target)?;
                st.end()
            }
            UpperBound::Cycle { p, evidence } => {
                let mut st = s.serialize_struct("UpperBound", 3)?;
                st.serialize_field("name", &self.name())?;
                st.serialize_field("p", p)?;
                st.serialize_field("evidence", evidence)?;
                st.end()
            }
        }
    }
}

/// Condition satisfaction on the core. `None` marks a check skipped for
/// exceeding the budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub maltsev: bool,
    /// `(n, Pol ⊨ Σ_n)` in increasing `n`.
    pub cyclic: Vec<(usize, Option<bool>)>,
}

impl Signature {
    pub fn cyclic(&self, n: usize) -> Option<bool> {
        self.cyclic
            .iter()
            .find(|&&(m, _)| m == n)
            .and_then(|&(_, v)| v)
    }

    /// Entries as `(name, value)`: `maltsev` first, then `cyclic:n`.
    pub fn entries(&self) -> Vec<(String, Option<bool>)> {
        let mut out = vec![("maltsev".to_string(), Some(self.maltsev))];
        out.extend(
            self.cyclic
                .iter()
                .map(|&(n, v)| (Builtin::Cyclic(n).to_string(), v)),
        );
        out
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.entries();
        let mut map = s.serialize_map(Some(entries.len()))?;
        for (k, v) in &entries {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub core: Digraph,
    /// `T3` first, then cycles by increasing prime.
    pub upper_bounds: Vec<UpperBound>,
    pub signature: Signature,
}

/// Which cyclic conditions to test.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum PrimeSelection {
    /// Every prime up to the number of core vertices.
    #[default]
    UpToCoreSize,
    UpTo(usize),
    /// Explicit orders; composite ones only enter the signature.
    List(Vec<usize>),
}

impl PrimeSelection {
    fn resolve(&self, core_size: usize) -> Vec<usize> {
        let mut out = match self {
            PrimeSelection::UpToCoreSize => primes_up_to(core_size),
            PrimeSelection::UpTo(b) => primes_up_to(*b),
            PrimeSelection::List(l) => l.iter().copied().filter(|&n| n >= 2).collect(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct ClassifyOptions {
    pub primes: PrimeSelection,
    pub limits: Limits,
}

pub fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub fn primes_up_to(bound: usize) -> Vec<usize> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// Runs one condition check; resource limits become `None` when `tolerant`.
fn check(core: &Digraph, b: Builtin, limits: &Limits, tolerant: bool) -> Result<Option<bool>> {
    match satisfies(core, &b.condition()?, limits) {
        Ok(w) => Ok(Some(w.is_some())),
        Err(e) if tolerant && e.is_resource_limit() => Ok(None),
        Err(e) => Err(e),
    }
}

/// The Maltsev entry comes from the indicator search, cross-checked against
/// total rectangularity; over budget, rectangularity alone decides.
fn signature_of_core(
    core: &Digraph,
    orders: &[usize],
    limits: &Limits,
    tolerant: bool,
) -> Result<Signature> {
    let rect = is_totally_rectangular(core).is_ok();
    let maltsev = match check(core, Builtin::Maltsev, limits, true)? {
        Some(m) if m != rect => {
            return Err(Error::InternalInconsistency(format!(
                "Maltsev search says {m} but total rectangularity says {rect}"
            )))
        }
        _ => rect,
    };
    let cyclic = orders
        .iter()
        .map(|&n| Ok((n, check(core, Builtin::Cyclic(n), limits, tolerant)?)))
        .collect::<Result<_>>()?;
    Ok(Signature { maltsev, cyclic })
}

/// Satisfaction of `Σ_M` and of `Σ_n` for each requested `n ≥ 2`, on the
/// core of `g`. Budget failures are errors here.
pub fn signature(g: &Digraph, orders: &[usize], limits: &Limits) -> Result<Signature> {
    let core = core_of(g, &limits.search)?.digraph;
    let mut orders: Vec<usize> = orders.to_vec();
    if let Some(&bad) = orders.iter().find(|&&n| n < 2) {
        return Err(Error::UnknownBuiltin(format!("cyclic:{bad}")));
    }
    orders.sort_unstable();
    orders.dedup();
    signature_of_core(&core, &orders, limits, false)
}

pub fn classify(g: &Digraph, opts: &ClassifyOptions) -> Result<Classification> {
    let limits = &opts.limits;
    let core = core_of(g, &limits.search)?.digraph;
    let orders = opts.primes.resolve(core.vertex_count());
    let signature = signature_of_core(&core, &orders, limits, true)?;

    let trivial = core.has_loop() || core.vertex_count() == 1;
    if trivial {
        return Ok(Classification {
            verdict: Verdict::EquivalentP1,
            core,
            upper_bounds: Vec::new(),
            signature,
        });
    }

    let mut upper_bounds = Vec::new();
    let mut shortest = None;
    match is_totally_rectangular(&core) {
        Err(witness) => {
            if !witness.verify(&core) {
                return Err(Error::InternalInconsistency(
                    "rectangularity witness does not verify".into(),
                ));
            }
            let construction = t3_from_core(core.clone(), limits)?;
            upper_bounds.push(UpperBound::T3 {
                witness,
                construction: Box::new(construction),
            });
        }
        Ok(()) => match shape_of(&core) {
            report if matches!(report.kind, ShapeKind::Path(k) if k >= 2) => {
                if let Some(&(n, _)) = signature.cyclic.iter().find(|(_, v)| *v == Some(false)) {
                    return Err(Error::InternalInconsistency(format!(
                        "path core fails the cyclic condition of order {n}"
                    )));
                }
                return Ok(Classification {
                    verdict: Verdict::EquivalentP2,
                    core,
                    upper_bounds,
                    signature,
                });
            }
            report => match (report.kind, report.shortest_cycle) {
                (ShapeKind::DisjointUnionOfCycles(_), Some(l)) if l >= 2 => shortest = Some(l),
                (kind, _) => {
                    return Err(Error::InternalInconsistency(format!(
                        "totally rectangular core of unexpected shape {kind:?}"
                    )))
                }
            },
        },
    }

    let mut candidates: Vec<usize> = orders.iter().copied().filter(|&p| is_prime(p)).collect();
    if let Some(l) = shortest {
        candidates.extend(primes_up_to(l).into_iter().filter(|p| l % p == 0));
    }
    candidates.sort_unstable();
    candidates.dedup();
    for p in candidates {
        let divides = shortest.filter(|l| l % p == 0);
        let sigma_p = match signature.cyclic.iter().find(|&&(n, _)| n == p) {
            Some(&(_, v)) => v,
            None => check(&core, Builtin::Cyclic(p), limits, true)?,
        };
        if divides.is_some() && sigma_p == Some(true) {
            return Err(Error::InternalInconsistency(format!(
                "cyclic condition of order {p} holds although {p} divides the shortest cycle"
            )));
        }
        if divides.is_some() || sigma_p == Some(false) {
            upper_bounds.push(UpperBound::Cycle {
                p,
                evidence: CycleEvidence {
                    sigma_p,
                    divides_shortest_cycle: divides,
                },
            });
        }
    }
    if upper_bounds.is_empty() {
        return Err(Error::InternalInconsistency(
            "digraph below P2 without an upper bound".into(),
        ));
    }
    Ok(Classification {
        verdict: Verdict::StrictlyBelow,
        core,
        upper_bounds,
        signature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{clique, cycle, disjoint_union, path, t3};

    fn run(g: &Digraph) -> Classification {
        classify(g, &ClassifyOptions::default()).unwrap()
    }

    fn bounds(c: &Classification) -> Vec<String> {
        c.upper_bounds.iter().map(UpperBound::name).collect()
    }

    #[test]
    fn trivial_cores() {
        assert_eq!(run(&cycle(1)).verdict, Verdict::EquivalentP1);
        assert_eq!(
            run(&Digraph::new(4, []).unwrap()).verdict,
            Verdict::EquivalentP1
        );
        let looped = Digraph::new(3, [(0, 1), (1, 1), (2, 0)]).unwrap();
        let c = run(&looped);
        assert_eq!(c.verdict, Verdict::EquivalentP1);
        assert_eq!(c.core, cycle(1));
    }

    #[test]
    fn paths_are_p2() {
        for k in 2..=5 {
            let c = run(&path(k));
            assert_eq!(c.verdict, Verdict::EquivalentP2, "P_{k}");
            assert!(c.upper_bounds.is_empty());
            assert!(c.signature.maltsev);
        }
    }

    #[test]
    fn six_cycle() {
        let c = run(&cycle(6));
        assert_eq!(c.verdict, Verdict::StrictlyBelow);
        assert_eq!(bounds(&c), vec!["C_2", "C_3"]);
        match &c.upper_bounds[0] {
            UpperBound::Cycle { evidence, .. } => {
                assert_eq!(evidence.divides_shortest_cycle, Some(6));
                assert_eq!(evidence.sigma_p, Some(false));
            }
            other => panic!("unexpected bound {other:?}"),
        }
    }

    #[test]
    fn clique_and_tournament() {
        let k3 = run(&clique(3));
        assert_eq!(k3.verdict, Verdict::StrictlyBelow);
        assert_eq!(bounds(&k3), vec!["T3", "C_2", "C_3"]);
        let t = run(&t3());
        assert_eq!(bounds(&t), vec!["T3"]);
        assert!(!t.signature.maltsev);
    }

    #[test]
    fn cycle_unions_use_the_shortest_cycle() {
        let c = run(&disjoint_union(&[cycle(6), cycle(3)]).unwrap());
        assert_eq!(c.core, cycle(3));
        assert_eq!(bounds(&c), vec!["C_3"]);
        // C_6 and C_4 are incomparable, so both stay in the core
        let c = run(&disjoint_union(&[cycle(6), cycle(4)]).unwrap());
        assert_eq!(c.core.vertex_count(), 10);
        assert_eq!(bounds(&c)[0], "C_2");
    }

    #[test]
    fn explicit_primes_beyond_the_core() {
        let opts = ClassifyOptions {
            primes: PrimeSelection::List(vec![2, 4, 5, 7]),
            ..Default::default()
        };
        let c = classify(&cycle(5), &opts).unwrap();
        assert_eq!(bounds(&c), vec!["C_5"]);
        assert_eq!(c.signature.cyclic(4), Some(true));
        assert_eq!(c.signature.cyclic(7), Some(true));
    }

    #[test]
    fn signatures() {
        let l = Limits::default();
        let t = signature(&t3(), &[2, 3, 5], &l).unwrap();
        assert_eq!(
            (t.maltsev, t.cyclic(2), t.cyclic(3), t.cyclic(5)),
            (false, Some(true), Some(true), Some(true))
        );
        let c5 = signature(&cycle(5), &[2, 3, 5], &l).unwrap();
        assert_eq!(
            (c5.maltsev, c5.cyclic(2), c5.cyclic(3), c5.cyclic(5)),
            (true, Some(true), Some(true), Some(false))
        );
        let c2 = signature(&cycle(2), &[2, 3, 5], &l).unwrap();
        assert_eq!(
            (c2.maltsev, c2.cyclic(2), c2.cyclic(3), c2.cyclic(5)),
            (true, Some(false), Some(true), Some(true))
        );
        assert!(signature(&t3(), &[1], &l).is_err());
    }

    #[test]
    fn json_shape() {
        let c = run(&cycle(6));
        let v = serde_json::to_string(&c).unwrap();
        assert!(
            v.starts_with("{\"verdict\":\"StrictlyBelow\",\"core\":{\"n\":6"),
            "{v}"
        );
        assert!(v.contains("\"signature\":{\"maltsev\":true,\"cyclic:2\":false,\"cyclic:3\":false,\"cyclic:5\":true}"));
    }

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(12), vec![2, 3, 5, 7, 11]);
        assert!(!is_prime(1) && !is_prime(9) && is_prime(13));
    }
}
