//! Property battery for general-linear varieties, with brute-force oracles.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arthur::is_arthur_type;
use crate::bridge::{self, bridge_permutations};
use crate::conventions::FROZEN;
use crate::error::Result;
use crate::geometry::{dual_map, is_smooth_closure, mw_multisegment, DualStrategy};
use crate::kl::{bruhat_leq, KlEngine, KlPolynomial, Permutation};
use crate::orbits::{point_rank_matrix, Multisegment, OrbitTable, Segment};
use crate::variety::{build_variety, Exponent, Family, GradedDims};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// First counterexample, when the check failed.
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:<22} {}\n", c.name, if c.passed { "pass" } else { "FAIL" }));
            if let Some(x) = &c.counterexample {
                out.push_str(&format!("  counterexample: {x}\n"));
            }
        }
        out
    }
}

pub const CHECKS: &[&str] = &[
    "representative-ranks",
    "multiplicity-support",
    "smooth-indicator",
    "open-identity",
    "kl-oracle",
    "dual-involution",
    "dual-order-reversal",
    "dual-open-closed",
    "dual-mw",
    "smooth-agreement",
    "arthur-brute-force",
];

struct Collector {
    failures: BTreeMap<&'static str, String>,
}

impl Collector {
    fn require(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.entry(name).or_insert_with(detail);
        }
    }

    fn finish(self) -> VerifyReport {
        let checks = CHECKS
            .iter()
            .map(|&name| {
                let counterexample = self.failures.get(name).cloned();
                CheckResult { name: name.to_string(), passed: counterexample.is_none(), counterexample }
            })
            .collect();
        VerifyReport { checks }
    }
}

/// Runs every check on the general-linear variety of `dims`.
pub fn verify_variety(dims: &GradedDims, engine: &KlEngine, seed: u64) -> Result<VerifyReport> {
    let v = build_variety(dims, Family::Gl)?;
    let t = OrbitTable::new(v.clone())?;
    let dual_t = OrbitTable::new(v.dual())?;
    let back_t = OrbitTable::new(dual_t.variety.dual())?;
    let n = t.len();
    let show = |c: usize| t.orbits[c].label.display(dims);
    let mut col = Collector { failures: BTreeMap::new() };

    for o in &t.orbits {
        col.require("representative-ranks", point_rank_matrix(&v, &o.representative) == o.rank_matrix, || {
            format!("orbit {}", show(o.id))
        });
    }

    let smooth: Vec<bool> = (0..n).map(|c| is_smooth_closure(&t, c)).collect::<Result<_>>()?;
    let rational: Vec<bool> = (0..n).map(|c| bridge::rationally_smooth(&t, engine, c)).collect::<Result<_>>()?;
    let m = bridge::multiplicity_matrix(&t, engine)?;

    for c in 0..n {
        for d in 0..n {
            let e = m.get(c, d).unwrap_or(0);
            let ok = if c == d { e == 1 } else { (e > 0) == t.leq(c, d) };
            col.require("multiplicity-support", ok, || format!("entry[{}][{}] = {e}", show(c), show(d)));
        }
    }
    for d in (0..n).filter(|&d| smooth[d]) {
        let indicator: Vec<Option<u64>> = (0..n).map(|c| Some(u64::from(t.leq(c, d)))).collect();
        col.require("smooth-indicator", m.column(d) == indicator, || {
            format!("smooth closure {} has column {:?}", show(d), m.column(d))
        });
    }
    for c in 0..n {
        let unit = m.row(c).iter().enumerate().all(|(d, &e)| e == Some(u64::from(c == d)));
        col.require("open-identity", unit == t.orbits[c].is_open, || {
            format!("orbit {} open = {}, row {:?}", show(c), t.orbits[c].is_open, m.row(c))
        });
    }

    let perms = bridge_permutations(&t, FROZEN)?;
    let mut oracle = KlOracle::default();
    for c in 0..n {
        for d in (0..n).filter(|&d| t.leq(c, d)) {
            let p = oracle.poly(&perms[c], &perms[d]);
            let e = m.get(c, d).unwrap_or(0) as i64;
            col.require("kl-oracle", p.eval_at_one() == e, || {
                format!("P({}, {}) = {p} but entry is {e}", show(c), show(d))
            });
        }
    }

    let strategy = DualStrategy::Randomized { seed };
    let fwd = dual_map(&t, &dual_t, strategy)?;
    let bwd = dual_map(&dual_t, &back_t, strategy)?;
    for c in 0..n {
        col.require("dual-involution", bwd[fwd[c]] == c, || format!("orbit {} maps back to {}", show(c), bwd[fwd[c]]));
        for d in 0..n {
            col.require("dual-order-reversal", t.leq(c, d) == dual_t.leq(fwd[d], fwd[c]), || {
                format!("orbits {} and {}", show(c), show(d))
            });
        }
        let mw = mw_multisegment(&t.orbits[c].multisegment);
        col.require("dual-mw", dual_t.orbits[fwd[c]].multisegment == mw, || {
            format!("orbit {}: duality gives {}, MW gives {}", show(c), dual_t.orbits[fwd[c]].multisegment.display(dims), mw.display(dims))
        });
        col.require("smooth-agreement", smooth[c] == rational[c], || {
            format!("orbit {}: Jacobian {} vs KL {}", show(c), smooth[c], rational[c])
        });
    }
    col.require("dual-open-closed", fwd[t.open_id()] == dual_t.closed_id() && fwd[t.closed_id()] == dual_t.open_id(), || {
        format!("open -> {}, closed -> {}", fwd[t.open_id()], fwd[t.closed_id()])
    });

    let brute = arthur_brute_force(dims);
    for o in &t.orbits {
        let fast = is_arthur_type(dims, &o.multisegment).is_arthur;
        col.require("arthur-brute-force", fast == brute.contains(&o.multisegment), || {
            format!("orbit {}: backtracking {fast}, enumeration {}", show(o.id), !fast)
        });
    }
    col.require("arthur-brute-force", brute.iter().all(|b| t.orbits.iter().any(|o| &o.multisegment == b)), || {
        "enumeration produced a multisegment outside the orbit table".into()
    });

    Ok(col.finish())
}

/// Every dimension vector with `1 <= Σd <= max_total` on at most `max_points`
/// consecutive grid points, nonzero at both ends, centered about exponent 0.
pub fn dimension_vectors(max_total: usize, max_points: usize) -> Vec<GradedDims> {
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            if cur[0] > 0 && cur[k - 1] > 0 {
                out.push(cur.clone());
            }
            return;
        }
        for d in 0..=left {
            cur.push(d);
            rec(k, left - d, cur, out);
            cur.pop();
        }
    }
    let mut vectors = Vec::new();
    for k in 1..=max_points {
        rec(k, max_total, &mut Vec::new(), &mut vectors);
    }
    vectors
        .into_iter()
        .map(|d| {
            let offset = Ratio::new(1 - d.len() as i64, 2);
            GradedDims::single(offset, &d).expect("valid dimension vector")
        })
        .collect()
}

/// All multisegments that split into zero-centered rectangles, by exhaustive
/// enumeration of rectangle multisets with matching content.
pub fn arthur_brute_force(dims: &GradedDims) -> BTreeSet<Multisegment> {
    let mut per_chain: Vec<Vec<Vec<Segment>>> = Vec::new();
    for (ci, chain) in dims.chains.iter().enumerate() {
        // every zero-centered rectangle that fits on the chain, as segments
        let mut rects: Vec<Vec<Segment>> = Vec::new();
        let total: usize = chain.dims.values().sum();
        for d in 1..=total {
            for a in 1..=total / d {
                let first: Exponent = -Ratio::new((a + d) as i64 - 2, 2);
                let idx = first - chain.offset;
                if !idx.is_integer() {
                    continue;
                }
                let s0 = idx.to_integer();
                let segs: Vec<Segment> = (0..a as i64).map(|k| Segment::new(ci, s0 + k, s0 + k + d as i64 - 1)).collect();
                if segs.iter().all(|s| (s.start..=s.end).all(|p| chain.dim(p) > 0)) {
                    rects.push(segs);
                }
            }
        }
        let mut found = Vec::new();
        pick(&rects, 0, &chain.dims, &mut BTreeMap::new(), &mut Vec::new(), &mut found);
        per_chain.push(found);
    }
    let mut out = BTreeSet::new();
    combine(&per_chain, 0, &mut Vec::new(), &mut out);
    out
}

fn pick(
    rects: &[Vec<Segment>],
    from: usize,
    target: &BTreeMap<i64, usize>,
    used: &mut BTreeMap<i64, usize>,
    segs: &mut Vec<Segment>,
    found: &mut Vec<Vec<Segment>>,
) {
    if target.iter().all(|(p, &d)| used.get(p).copied().unwrap_or(0) == d) {
        found.push(segs.clone());
        return;
    }
    for i in from..rects.len() {
        let fits = rects[i].iter().flat_map(|s| s.start..=s.end).fold(used.clone(), |mut acc, p| {
            *acc.entry(p).or_default() += 1;
            acc
        });
        if fits.iter().any(|(p, &c)| c > target.get(p).copied().unwrap_or(0)) {
            continue;
        }
        let saved = std::mem::replace(used, fits);
        let len = segs.len();
        segs.extend_from_slice(&rects[i]);
        pick(rects, i, target, used, segs, found);
        segs.truncate(len);
        *used = saved;
    }
}

fn combine(per_chain: &[Vec<Vec<Segment>>], k: usize, cur: &mut Vec<Segment>, out: &mut BTreeSet<Multisegment>) {
    if k == per_chain.len() {
        out.insert(Multisegment::new(cur.clone()));
        return;
    }
    for option in &per_chain[k] {
        let len = cur.len();
        cur.extend_from_slice(option);
        combine(per_chain, k + 1, cur, out);
        cur.truncate(len);
    }
}

/// Pair-memoized KL recursion over left descents, independent of [`KlEngine`].
#[derive(Default)]
pub struct KlOracle {
    memo: HashMap<(Permutation, Permutation), KlPolynomial>,
}

impl KlOracle {
    pub fn poly(&mut self, x: &Permutation, w: &Permutation) -> KlPolynomial {
        if let Some(p) = self.memo.get(&(x.clone(), w.clone())) {
            return p.clone();
        }
        let p = self.compute(x, w);
        self.memo.insert((x.clone(), w.clone()), p.clone());
        p
    }

    fn mu(&mut self, z: &Permutation, v: &Permutation) -> i64 {
        let (lz, lv) = (z.length(), v.length());
        if lz >= lv || (lv - lz) % 2 == 0 {
            return 0;
        }
        self.poly(z, v).coeff((lv - lz - 1) / 2)
    }

    fn compute(&mut self, x: &Permutation, w: &Permutation) -> KlPolynomial {
        if !bruhat_leq(x, w).unwrap_or(false) {
            return KlPolynomial::zero();
        }
        if x == w {
            return KlPolynomial::one();
        }
        let n = w.size();
        let s = (0..n - 1).find(|&i| w.is_left_descent(i)).expect("w above x is not the identity");
        let v = w.simple_times(s);
        let sx = x.simple_times(s);
        let c = usize::from(x.is_left_descent(s));
        let mut coeffs = vec![0i64; w.length() + 2];
        let add = |coeffs: &mut Vec<i64>, p: &KlPolynomial, shift: usize, sign: i64| {
            for (k, &a) in p.0.iter().enumerate() {
                coeffs[k + shift] += sign * a;
            }
        };
        let a = self.poly(&sx, &v);
        add(&mut coeffs, &a, 1 - c, 1);
        let b = self.poly(x, &v);
        add(&mut coeffs, &b, c, 1);
        for z in Permutation::all(n) {
            if !z.is_left_descent(s) || z.length() >= v.length() {
                continue;
            }
            if !bruhat_leq(x, &z).unwrap_or(false) || !bruhat_leq(&z, &v).unwrap_or(false) {
                continue;
            }
            let mu = self.mu(&z, &v);
            if mu != 0 {
                let pz = self.poly(x, &z);
                add(&mut coeffs, &pz, (w.length() - z.length()) / 2, -mu);
            }
        }
        KlPolynomial::from_coeffs(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn oracle_3412() {
        let mut o = KlOracle::default();
        let p = o.poly(&Permutation::identity(4), &Permutation::parse("3412").unwrap());
        assert_eq!(p, KlPolynomial::from_coeffs(vec![1, 1]));
        let p = o.poly(&Permutation::parse("1324").unwrap(), &Permutation::parse("3412").unwrap());
        assert_eq!(p, KlPolynomial::from_coeffs(vec![1, 1]));
    }

    #[test]
    fn brute_force_counts() {
        let two = GradedDims::two_eigenvalue(2).unwrap();
        assert_eq!(arthur_brute_force(&two).len(), 3);
        let st = GradedDims::steinberg(3).unwrap();
        assert_eq!(arthur_brute_force(&st).len(), 2);
        let lopsided = GradedDims::single(Exponent::zero(), &[1, 1]).unwrap();
        assert!(arthur_brute_force(&lopsided).is_empty());
    }

    #[test]
    fn enumeration_shape() {
        let all = dimension_vectors(2, 3);
        // [1] [2] [1,1] [1,0,1]
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn small_battery() {
        let engine = KlEngine::new();
        for dims in [GradedDims::steinberg(3).unwrap(), GradedDims::two_eigenvalue(2).unwrap()] {
            let r = verify_variety(&dims, &engine, 0).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }
}
