//! Randomized law suite: the operator identities and property-transfer
//! rules checked on seeded random finite instances.
//!
//! Reproducibility: every instance is generated from a ChaCha8 stream
//! seeded with `seed ^ (index * 0x9E3779B97F4A7C15)`, so a failure is
//! reproducible from `(seed, index)` alone.  Instances use m, n in {1,2},
//! universes of at most 3 signals per side, at most 4 events per signal,
//! event times and pattern durations on the quarter-integer grid in
//! [-4, 4], and a mix of constant and periodic tails.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bvec::BVec;
use crate::error::Result;
use crate::properties::{boundary_report, state_function, Side, StateLevel};
use crate::pseudo_system::PseudoSystem;
use crate::signal::{LeftTail, Pattern, RightTail, Signal};
use crate::time::Time;

#[derive(Clone, Debug)]
pub struct LawFailure {
    pub law: &'static str,
    pub iteration: u64,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct LawOutcome {
    /// Iterations fully executed (a failing iteration is not counted).
    pub iterations: u64,
    /// Pass count per law.
    pub counters: BTreeMap<&'static str, u64>,
    pub failure: Option<LawFailure>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn iteration_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

// ---------------------------------------------------------------------------
// Instance generation.

fn gen_bvec(rng: &mut ChaCha8Rng, dim: usize) -> BVec {
    let bits: String = (0..dim)
        .map(|_| if rng.gen_bool(0.5) { '1' } else { '0' })
        .collect();
    BVec::from_bits(&bits).unwrap()
}

fn gen_pattern(rng: &mut ChaCha8Rng, dim: usize) -> Pattern {
    let k = rng.gen_range(1..=3);
    let segs: Vec<(Time, BVec)> = (0..k)
        .map(|_| (Time::new(rng.gen_range(1..=4), 4), gen_bvec(rng, dim)))
        .collect();
    Pattern::new(segs).unwrap()
}

pub fn gen_signal(rng: &mut ChaCha8Rng, dim: usize, plain: bool) -> Signal {
    if rng.gen_range(0..8) == 0 {
        return Signal::constant(gen_bvec(rng, dim));
    }
    let left = if plain || rng.gen_bool(0.7) {
        LeftTail::Const(gen_bvec(rng, dim))
    } else {
        LeftTail::Periodic(gen_pattern(rng, dim))
    };
    let right = if plain || rng.gen_bool(0.7) {
        RightTail::Const
    } else {
        RightTail::Periodic(gen_pattern(rng, dim))
    };
    let k = rng.gen_range(1..=4);
    let mut quarters: Vec<i64> = Vec::new();
    while quarters.len() < k {
        let q = rng.gen_range(-16..=16);
        if !quarters.contains(&q) {
            quarters.push(q);
        }
    }
    quarters.sort_unstable();
    let events: Vec<(Time, BVec)> = quarters
        .into_iter()
        .map(|q| (Time::new(q, 4), gen_bvec(rng, dim)))
        .collect();
    Signal::make(dim, left, events, right).unwrap()
}

fn gen_universe(rng: &mut ChaCha8Rng, dim: usize, plain: bool) -> Vec<Signal> {
    let k = rng.gen_range(1..=3);
    let mut sigs: Vec<Signal> = (0..k).map(|_| gen_signal(rng, dim, plain)).collect();
    sigs.sort();
    sigs.dedup();
    sigs
}

fn gen_table(rng: &mut ChaCha8Rng, nu: usize, nx: usize, nonempty: bool) -> Vec<(usize, usize)> {
    let mut rel = Vec::new();
    for iu in 0..nu {
        for ix in 0..nx {
            if rng.gen_bool(0.5) {
                rel.push((iu, ix));
            }
        }
    }
    if nonempty && rel.is_empty() {
        rel.push((rng.gen_range(0..nu), rng.gen_range(0..nx)));
    }
    rel
}

pub fn gen_ps(rng: &mut ChaCha8Rng, m: usize, n: usize, plain: bool, nonempty: bool) -> PseudoSystem {
    let inputs = gen_universe(rng, m, plain);
    let states = gen_universe(rng, n, plain);
    let rel = gen_table(rng, inputs.len(), states.len(), nonempty);
    PseudoSystem::new(m, n, inputs, states, &rel).unwrap()
}

/// Two maps over one shared pair of universes.
pub fn gen_shared_pair(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    plain: bool,
    nonempty: bool,
) -> (PseudoSystem, PseudoSystem) {
    let inputs = gen_universe(rng, m, plain);
    let states = gen_universe(rng, n, plain);
    let ra = gen_table(rng, inputs.len(), states.len(), nonempty);
    let rb = gen_table(rng, inputs.len(), states.len(), nonempty);
    let a = PseudoSystem::new(m, n, inputs.clone(), states.clone(), &ra).unwrap();
    let b = PseudoSystem::new(m, n, inputs, states, &rb).unwrap();
    (a, b)
}

/// A sub-map of `g`: same universes, each pair kept with probability 1/2.
fn sub_of(rng: &mut ChaCha8Rng, g: &PseudoSystem) -> PseudoSystem {
    let rel: Vec<(usize, usize)> = g.pairs().filter(|_| rng.gen_bool(0.5)).collect();
    PseudoSystem::new(
        g.input_dim(),
        g.state_dim(),
        g.inputs().to_vec(),
        g.states().to_vec(),
        &rel,
    )
    .unwrap()
}

fn null_like(f: &PseudoSystem) -> PseudoSystem {
    PseudoSystem::new(
        f.input_dim(),
        f.state_dim(),
        f.inputs().to_vec(),
        f.states().to_vec(),
        &[],
    )
    .unwrap()
}

fn total_like(f: &PseudoSystem) -> PseudoSystem {
    let mut rel = Vec::new();
    for iu in 0..f.inputs().len() {
        for ix in 0..f.states().len() {
            rel.push((iu, ix));
        }
    }
    PseudoSystem::new(
        f.input_dim(),
        f.state_dim(),
        f.inputs().to_vec(),
        f.states().to_vec(),
        &rel,
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// Check helpers.

type Check = std::result::Result<(), String>;

fn eq(a: &PseudoSystem, b: &PseudoSystem) -> Check {
    if a == b {
        Ok(())
    } else {
        Err(format!("expected equal maps; left:\n{a}\nright:\n{b}"))
    }
}

fn sub(a: &PseudoSystem, b: &PseudoSystem) -> Check {
    match a.is_subsystem(b) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("expected inclusion; left:\n{a}\nright:\n{b}")),
        Err(e) => Err(e.to_string()),
    }
}

fn ck(b: bool, msg: &str) -> Check {
    if b {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn levels(f: &PseudoSystem, side: Side) -> StateLevel {
    boundary_report(f, side).state_level
}

// ---------------------------------------------------------------------------
// Identity laws.

fn identity_checks(rng: &mut ChaCha8Rng) -> Vec<(&'static str, Check)> {
    let m = rng.gen_range(1..=2);
    let n = rng.gen_range(1..=2);
    let n2 = rng.gen_range(1..=2);
    let p = rng.gen_range(1..=2);

    let f = gen_ps(rng, m, n, false, false);
    let f2 = gen_ps(rng, m, n2, false, false);
    let (g1, g2) = gen_shared_pair(rng, m, n, false, false);
    let (q1, q2) = gen_shared_pair(rng, m, n2, false, false);
    let (h, h1) = gen_shared_pair(rng, n, p, false, false);
    let h2 = gen_ps(rng, n2, p, false, false);
    let fsub = sub_of(rng, &g2);

    let mut out: Vec<(&'static str, Check)> = Vec::new();

    out.push(("dual_involution", eq(&f.dual().dual(), &f)));
    out.push(("inverse_involution", eq(&f.inverse().inverse(), &f)));
    out.push(("complement_involution", eq(&f.complement().complement(), &f)));
    out.push((
        "dual_inverse_commute",
        eq(&f.dual().inverse(), &f.inverse().dual()),
    ));

    // Order basics: null and total bound everything over shared universes.
    out.push((
        "order_bounds",
        sub(&null_like(&g1), &g1)
            .and_then(|_| sub(&g1, &total_like(&g1)))
            .and_then(|_| sub(&g1, &g1)),
    ));
    out.push((
        "order_dual_iff",
        ck(
            g1.is_subsystem(&g2).unwrap() == g1.dual().is_subsystem(&g2.dual()).unwrap(),
            "inclusion must agree with inclusion of duals",
        ),
    ));
    out.push((
        "order_inverse_monotone",
        sub(&fsub.inverse(), &g2.inverse()),
    ));
    out.push((
        "order_complement_iff",
        ck(
            g1.is_subsystem(&g2).unwrap()
                == g2.complement().is_subsystem(&g1.complement()).unwrap(),
            "inclusion must flip through complements",
        ),
    ));
    out.push(("order_product_forward", {
        let fsub2 = sub_of(rng, &q2);
        sub(&fsub.product(&fsub2), &g2.product(&q2))
    }));
    if !g1.is_null() && !q1.is_null() {
        out.push((
            "order_product_converse",
            ck(
                (g1.is_subsystem(&g2).unwrap() && q1.is_subsystem(&q2).unwrap())
                    == g1.product(&q1).is_subsystem(&g2.product(&q2)).unwrap(),
                "product inclusion must coincide with factor inclusions",
            ),
        ));
    }

    out.push((
        "dual_product",
        eq(&f.product(&f2).dual(), &f.dual().product(&f2.dual())),
    ));
    out.push((
        "inverse_product",
        eq(&f.product(&f2).inverse(), &f.inverse().product(&f2.inverse())),
    ));

    let hf = PseudoSystem::serial(&h, &f).unwrap();
    out.push((
        "dual_serial",
        eq(
            &hf.dual(),
            &PseudoSystem::serial(&h.dual(), &f.dual()).unwrap(),
        ),
    ));
    out.push((
        "inverse_serial",
        eq(
            &hf.inverse(),
            &PseudoSystem::serial(&f.inverse(), &h.inverse()).unwrap(),
        ),
    ));
    out.push(("serial_monotone", {
        let a = sub(
            &PseudoSystem::serial(&h, &fsub).unwrap(),
            &PseudoSystem::serial(&h, &g2).unwrap(),
        );
        let hsub = sub_of(rng, &h);
        a.and_then(|_| {
            sub(
                &PseudoSystem::serial(&hsub, &f).unwrap(),
                &PseudoSystem::serial(&h, &f).unwrap(),
            )
        })
    }));

    out.push(("serial_inverse_character", {
        let lhs = PseudoSystem::serial(&f.inverse(), &f).unwrap();
        let mut res = Ok(());
        'outer: for u in f.inputs() {
            for v in f.inputs() {
                let fu: BTreeSet<&Signal> = f.apply(u).into_iter().collect();
                let meets = f.apply(v).into_iter().any(|x| fu.contains(x));
                if lhs.relates(u, v) != meets {
                    res = Err(format!(
                        "inverse-serial composition disagrees with image overlap at\n{u}\nand\n{v}"
                    ));
                    break 'outer;
                }
            }
        }
        res
    }));

    out.push((
        "serial_product_interchange",
        eq(
            &PseudoSystem::serial(&h.product(&h2), &f.product(&f2)).unwrap(),
            &PseudoSystem::serial(&h, &f)
                .unwrap()
                .product(&PseudoSystem::serial(&h2, &f2).unwrap()),
        ),
    ));
    out.push((
        "serial_parallel_interchange",
        eq(
            &PseudoSystem::serial(&h.product(&h2), &f.parallel(&f2).unwrap()).unwrap(),
            &PseudoSystem::serial(&h, &f)
                .unwrap()
                .parallel(&PseudoSystem::serial(&h2, &f2).unwrap())
                .unwrap(),
        ),
    ));

    out.push(("diagonal_law", {
        let par = f.parallel(&f2).unwrap();
        let prod = f.product(&f2);
        let mut res = Ok(());
        for u in par.inputs() {
            if par.apply(u) != prod.apply(&Signal::concat(u, u)) {
                res = Err(format!(
                    "parallel must factor through the product diagonally at\n{u}"
                ));
                break;
            }
        }
        res
    }));

    out.push((
        "dual_complement",
        eq(&f.complement().dual(), &f.dual().complement()),
    ));
    out.push((
        "inverse_complement",
        eq(&f.complement().inverse(), &f.inverse().complement()),
    ));
    out.push((
        "complement_product_subset",
        sub(
            &f.complement().product(&f2.complement()),
            &f.product(&f2).complement(),
        ),
    ));
    out.push((
        "complement_parallel_subset",
        sub(
            &f.complement().parallel(&f2.complement()).unwrap(),
            &f.parallel(&f2).unwrap().complement(),
        ),
    ));

    let (i12, u12) = (g1.intersect(&g2).unwrap(), g1.union(&g2).unwrap());
    out.push((
        "dual_distributes",
        eq(&i12.dual(), &g1.dual().intersect(&g2.dual()).unwrap())
            .and_then(|_| eq(&u12.dual(), &g1.dual().union(&g2.dual()).unwrap())),
    ));
    out.push((
        "inverse_distributes",
        eq(&i12.inverse(), &g1.inverse().intersect(&g2.inverse()).unwrap())
            .and_then(|_| eq(&u12.inverse(), &g1.inverse().union(&g2.inverse()).unwrap())),
    ));
    // Pairing constructions distribute over intersection exactly; over
    // union only the inclusion holds, because the left side pairs responses
    // across the two operands (see the strictness witness below).
    out.push(("product_distributes_intersect", {
        let iq = q1.intersect(&q2).unwrap();
        eq(
            &i12.product(&iq),
            &g1.product(&q1).intersect(&g2.product(&q2)).unwrap(),
        )
    }));
    out.push(("product_union_inclusion", {
        let uq = q1.union(&q2).unwrap();
        sub(
            &g1.product(&q1).union(&g2.product(&q2)).unwrap(),
            &u12.product(&uq),
        )
    }));
    out.push(("parallel_distributes_intersect", {
        let iq = q1.intersect(&q2).unwrap();
        eq(
            &i12.parallel(&iq).unwrap(),
            &g1.parallel(&q1)
                .unwrap()
                .intersect(&g2.parallel(&q2).unwrap())
                .unwrap(),
        )
    }));
    out.push(("parallel_union_inclusion", {
        let uq = q1.union(&q2).unwrap();
        sub(
            &g1.parallel(&q1)
                .unwrap()
                .union(&g2.parallel(&q2).unwrap())
                .unwrap(),
            &u12.parallel(&uq).unwrap(),
        )
    }));
    out.push((
        "lattice_idempotence",
        eq(&g1.intersect(&g1).unwrap(), &g1)
            .and_then(|_| eq(&g1.union(&g1).unwrap(), &g1))
            .and_then(|_| eq(&g1.intersect(&null_like(&g1)).unwrap(), &null_like(&g1)))
            .and_then(|_| eq(&g1.union(&null_like(&g1)).unwrap(), &g1)),
    ));

    out.push(("serial_lattice_inclusions", {
        let a = sub(
            &PseudoSystem::serial(&h, &i12).unwrap(),
            &PseudoSystem::serial(&h, &g1)
                .unwrap()
                .intersect(&PseudoSystem::serial(&h, &g2).unwrap())
                .unwrap(),
        );
        // The two union-shaped inclusions are equalities: an existential
        // over a union splits losslessly.
        let b = eq(
            &PseudoSystem::serial(&h, &u12).unwrap(),
            &PseudoSystem::serial(&h, &g1)
                .unwrap()
                .union(&PseudoSystem::serial(&h, &g2).unwrap())
                .unwrap(),
        );
        let c = sub(
            &PseudoSystem::serial(&h.intersect(&h1).unwrap(), &f).unwrap(),
            &PseudoSystem::serial(&h, &f)
                .unwrap()
                .intersect(&PseudoSystem::serial(&h1, &f).unwrap())
                .unwrap(),
        );
        let d = eq(
            &PseudoSystem::serial(&h.union(&h1).unwrap(), &f).unwrap(),
            &PseudoSystem::serial(&h, &f)
                .unwrap()
                .union(&PseudoSystem::serial(&h1, &f).unwrap())
                .unwrap(),
        );
        a.and(b).and(c).and(d)
    }));

    // Systems: plain (constant-tail) universes guarantee admissibility.
    let s = gen_ps(rng, m, n, true, true);
    let s2 = gen_ps(rng, m, n2, true, true);
    let hs = gen_ps(rng, n, p, true, true);
    let (t1, t2) = gen_shared_pair(rng, m, n, true, true);

    out.push(("system_dual", ck(s.dual().is_system(), "dual of a system must be a system")));
    out.push((
        "system_inverse",
        ck(s.inverse().is_system(), "inverse of a system must be a system"),
    ));
    out.push((
        "system_product",
        ck(s.product(&s2).is_system(), "product of systems must be a system"),
    ));
    out.push(("system_parallel_iff", {
        let par = s.parallel(&s2).unwrap();
        let sup: BTreeSet<&Signal> = s.support().into_iter().collect();
        let meets = s2.support().into_iter().any(|u| sup.contains(u));
        ck(
            par.is_system() == meets,
            "parallel connection of systems is a system exactly when supports intersect",
        )
    }));
    out.push(("system_serial_iff", {
        let ser = PseudoSystem::serial(&hs, &s).unwrap();
        let dom: BTreeSet<&Signal> = hs.support().into_iter().collect();
        let cond = s
            .inputs()
            .iter()
            .any(|u| s.apply(u).into_iter().any(|x| dom.contains(x)));
        ck(
            ser.is_system() == cond,
            "serial connection of systems is a system exactly when some image meets the domain",
        )
    }));
    out.push(("system_intersect_iff", {
        let i = t1.intersect(&t2).unwrap();
        ck(
            i.is_system() == !i.is_null(),
            "intersection of systems is a system exactly when it is non-null",
        )
    }));
    out.push((
        "system_union",
        ck(
            t1.union(&t2).unwrap().is_system(),
            "union of systems must be a system",
        ),
    ));
    out.push(("system_subset_characterization", {
        let ssub = sub_of(rng, &s);
        let sup: BTreeSet<&Signal> = s.support().into_iter().collect();
        let chr = ssub.support().into_iter().all(|u| sup.contains(u))
            && ssub.inputs().iter().all(|u| {
                let big: BTreeSet<&Signal> = s.apply(u).into_iter().collect();
                ssub.apply(u).into_iter().all(|x| big.contains(x))
            });
        ck(
            ssub.is_subsystem(&s).unwrap() == chr,
            "inclusion must match the support/pointwise characterization",
        )
    }));

    out.push(("induced_fixpoint", match f.induced_system() {
        Ok(ind) => ck(ind.is_system(), "induced map must be a system")
            .and_then(|_| sub(&ind, &f))
            .and_then(|_| {
                // Equality with the induced map is read on the relations:
                // induction prunes universe entries that carry no pair.
                ck(
                    f.is_system() == (relation_of(&ind) == relation_of(&f)),
                    "a map is a system exactly when it equals its induced system",
                )
            }),
        Err(_) => ck(
            !f.is_system()
                && f.pairs().all(|(iu, ix)| {
                    f.inputs()[iu].initial_value().is_none()
                        || f.states()[ix].initial_value().is_none()
                }),
            "induction may only fail when no admissible pair exists",
        ),
    }));

    out.push(("induced_maximality", induced_maximality(&f)));

    out.push((
        "pairing_union_strictness_witness",
        pairing_union_strictness_witness(),
    ));
    out.push((
        "complement_pairing_strictness_witness",
        complement_pairing_strictness_witness(),
    ));
    out.push(("union_middle_failure_witness", union_middle_failure_witness()));
    out.push(("serial_strictness_witness", serial_strictness_witness()));
    out.push((
        "intersect_phi_strictness_witness",
        intersect_phi_strictness_witness(),
    ));

    out
}

fn relation_of(f: &PseudoSystem) -> BTreeSet<(Signal, Signal)> {
    f.pairs()
        .map(|(iu, ix)| (f.inputs()[iu].clone(), f.states()[ix].clone()))
        .collect()
}

/// Every sub-map of `f` that is a system is included in the induced system.
fn induced_maximality(f: &PseudoSystem) -> Check {
    let pairs: Vec<(usize, usize)> = f.pairs().collect();
    if pairs.len() > 8 {
        return Ok(());
    }
    let ind = f.induced_system();
    for mask in 1u32..(1 << pairs.len()) {
        let rel: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| *p)
            .collect();
        let g = PseudoSystem::new(
            f.input_dim(),
            f.state_dim(),
            f.inputs().to_vec(),
            f.states().to_vec(),
            &rel,
        )
        .unwrap();
        if !g.is_system() {
            continue;
        }
        match &ind {
            Ok(ind) => {
                for (iu, ix) in g.pairs() {
                    if !ind.relates(&g.inputs()[iu], &g.states()[ix]) {
                        return Err(format!(
                            "system sub-map escapes the induced system:\n{g}"
                        ));
                    }
                }
            }
            Err(_) => {
                return Err(format!(
                    "induction failed although a system sub-map exists:\n{g}"
                ))
            }
        }
    }
    Ok(())
}

fn bv(s: &str) -> BVec {
    BVec::from_bits(s).unwrap()
}

fn plain_step(at: i64, from: &str, to: &str) -> Signal {
    Signal::make(
        from.len(),
        LeftTail::Const(bv(from)),
        vec![(Time::int(at), bv(to))],
        RightTail::Const,
    )
    .unwrap()
}

/// The pairing constructions do not distribute over union: pairing the
/// unions admits one response from each operand, which neither paired
/// operand admits alone.
fn pairing_union_strictness_witness() -> Check {
    let u = plain_step(0, "0", "1");
    let x0 = Signal::constant(bv("0"));
    let x1 = Signal::constant(bv("1"));
    let f = PseudoSystem::new(1, 1, vec![u.clone()], vec![x0.clone(), x1.clone()], &[(0, 0)])
        .unwrap();
    let g = PseudoSystem::new(1, 1, vec![u.clone()], vec![x0.clone(), x1.clone()], &[(0, 1)])
        .unwrap();
    let f2 = f.clone();
    let g2 = g.clone();
    let cross = Signal::concat(&x0, &x1);
    let big = f
        .union(&g)
        .unwrap()
        .parallel(&f2.union(&g2).unwrap())
        .unwrap();
    let small = f
        .parallel(&f2)
        .unwrap()
        .union(&g.parallel(&g2).unwrap())
        .unwrap();
    ck(
        big.relates(&u, &cross) && !small.relates(&u, &cross),
        "pairing the unions must strictly exceed the union of the pairings",
    )
}

/// Complementation only half-commutes with the pairing constructions:
/// the complement of a pairing admits mixed responses (one coordinate
/// related, one not) that the pairing of the complements cannot produce.
fn complement_pairing_strictness_witness() -> Check {
    let u = plain_step(0, "0", "1");
    let x0 = Signal::constant(bv("0"));
    let x1 = Signal::constant(bv("1"));
    let f = PseudoSystem::new(1, 1, vec![u.clone()], vec![x0.clone(), x1.clone()], &[(0, 0)])
        .unwrap();
    let mixed = Signal::concat(&x0, &x1);
    let uu = Signal::concat(&u, &u);
    let prod_small = f.complement().product(&f.complement());
    let prod_big = f.product(&f).complement();
    let par_small = f.complement().parallel(&f.complement()).unwrap();
    let par_big = f.parallel(&f).unwrap().complement();
    ck(
        !prod_small.relates(&uu, &mixed)
            && prod_big.relates(&uu, &mixed)
            && !par_small.relates(&u, &mixed)
            && par_big.relates(&u, &mixed),
        "the complement of a pairing must strictly exceed the pairing of complements",
    )
}

/// Two constant-state maps whose union loses the race-free and constant
/// properties: the middle statements fail for the union.
fn union_middle_failure_witness() -> Check {
    let u = plain_step(0, "0", "1");
    let x0 = Signal::constant(bv("0"));
    let x1 = Signal::constant(bv("1"));
    let f = PseudoSystem::new(1, 1, vec![u.clone()], vec![x0.clone(), x1.clone()], &[(0, 0)])
        .unwrap();
    let g =
        PseudoSystem::new(1, 1, vec![u], vec![x0, x1], &[(0, 1)]).unwrap();
    let fu = f.union(&g).unwrap();
    ck(
        levels(&f, Side::Initial) == StateLevel::Constant
            && levels(&g, Side::Initial) == StateLevel::Constant
            && levels(&fu, Side::Initial) == StateLevel::HasStates,
        "union of distinct constant-state maps must drop to bare has-states",
    )
}

/// The two intersection-shaped serial inclusions are strict on this witness.
fn serial_strictness_witness() -> Check {
    let u = plain_step(0, "0", "1");
    let x1 = Signal::constant(bv("0"));
    let x2 = Signal::constant(bv("1"));
    let y = plain_step(1, "0", "1");
    let f = PseudoSystem::new(1, 1, vec![u.clone()], vec![x1.clone(), x2.clone()], &[(0, 0)])
        .unwrap();
    let g = PseudoSystem::new(1, 1, vec![u.clone()], vec![x1.clone(), x2.clone()], &[(0, 1)])
        .unwrap();
    let h = PseudoSystem::new(
        1,
        1,
        vec![x1.clone(), x2.clone()],
        vec![y.clone()],
        &[(0, 0), (1, 0)],
    )
    .unwrap();
    // h o (f n g) is null while (h o f) n (h o g) answers u with y.
    let lhs = PseudoSystem::serial(&h, &f.intersect(&g).unwrap()).unwrap();
    let rhs = PseudoSystem::serial(&h, &f)
        .unwrap()
        .intersect(&PseudoSystem::serial(&h, &g).unwrap())
        .unwrap();
    let first = lhs.is_null() && rhs.relates(&u, &y);
    // (h n h1) o f2 is null while the intersection of the compositions is not.
    let f2 = PseudoSystem::new(
        1,
        1,
        vec![u.clone()],
        vec![x1.clone(), x2.clone()],
        &[(0, 0), (0, 1)],
    )
    .unwrap();
    let ha = PseudoSystem::new(1, 1, vec![x1.clone(), x2.clone()], vec![y.clone()], &[(0, 0)])
        .unwrap();
    let hb = PseudoSystem::new(1, 1, vec![x1, x2], vec![y.clone()], &[(1, 0)]).unwrap();
    let lhs2 = PseudoSystem::serial(&ha.intersect(&hb).unwrap(), &f2).unwrap();
    let rhs2 = PseudoSystem::serial(&ha, &f2)
        .unwrap()
        .intersect(&PseudoSystem::serial(&hb, &f2).unwrap())
        .unwrap();
    ck(
        first && lhs2.is_null() && rhs2.relates(&u, &y),
        "serial connection must distribute over intersection strictly here",
    )
}

/// The pointwise intersection rule for state functions is only an
/// inclusion: two different states may share a limit value while the
/// intersection of the image sets is empty.
fn intersect_phi_strictness_witness() -> Check {
    let u = plain_step(0, "0", "1");
    let x = plain_step(1, "0", "1");
    let y = plain_step(2, "0", "1");
    let f = PseudoSystem::new(1, 1, vec![u.clone()], vec![x.clone(), y.clone()], &[(0, 0)])
        .unwrap();
    let g = PseudoSystem::new(1, 1, vec![u.clone()], vec![x, y], &[(0, 1)]).unwrap();
    let i = f.intersect(&g).unwrap();
    let pf = state_function(&f, Side::Initial).unwrap();
    let pg = state_function(&g, Side::Initial).unwrap();
    let pi = state_function(&i, Side::Initial).unwrap();
    let pointwise: BTreeSet<BVec> = pf
        .phi_of(&u)
        .intersection(&pg.phi_of(&u))
        .cloned()
        .collect();
    ck(
        pi.phi_of(&u).is_empty() && pointwise.len() == 1,
        "intersection state function must be strictly below the pointwise rule here",
    )
}

// ---------------------------------------------------------------------------
// Transfer laws.

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Construction {
    Subsystem,
    Dual,
    Inverse,
    Product,
    Serial,
    Intersect,
    Union,
}

/// Verify the property-transfer rules for one constructed instance.
/// `other` is the second operand where the construction needs one
/// (Subsystem: the larger map; Serial: the outer map is `f`, the inner
/// `other`).  Failures are results, not errors.
pub fn check_transfer_laws(
    f: &PseudoSystem,
    other: Option<&PseudoSystem>,
    construction: Construction,
) -> Result<Vec<(&'static str, std::result::Result<(), String>)>> {
    let mut out: Vec<(&'static str, Check)> = Vec::new();
    match construction {
        Construction::Subsystem => {
            let g = other.expect("subsystem transfer needs the enclosing map");
            for side in [Side::Initial, Side::Final] {
                let rf = boundary_report(f, side);
                let rg = boundary_report(g, side);
                out.push((
                    "subsystem_levels",
                    ck(
                        rf.state_level >= rg.state_level && rf.time_level >= rg.time_level,
                        "a sub-map keeps every property of the enclosing map",
                    ),
                ));
                if let (Ok(pf), Ok(pg)) = (state_function(f, side), state_function(g, side)) {
                    let ok = f.inputs().iter().all(|u| pf.phi_of(u).is_subset(&pg.phi_of(u)))
                        && pf.theta.is_subset(&pg.theta);
                    out.push((
                        "subsystem_phi_subset",
                        ck(ok, "sub-map state functions must be pointwise included"),
                    ));
                }
            }
        }
        Construction::Dual => {
            let d = f.dual();
            for side in [Side::Initial, Side::Final] {
                let rf = boundary_report(f, side);
                let rd = boundary_report(&d, side);
                out.push((
                    "dual_levels_equal",
                    ck(
                        rf.state_level == rd.state_level
                            && rf.time_level == rd.time_level
                            && rf.cell == rd.cell,
                        "a map and its dual must classify identically",
                    ),
                ));
                match (state_function(f, side), state_function(&d, side)) {
                    (Ok(pf), Ok(pd)) => {
                        let ok = d.inputs().iter().all(|u| {
                            let expect: BTreeSet<BVec> = pf
                                .phi_of(&u.complement())
                                .iter()
                                .map(BVec::complement)
                                .collect();
                            pd.phi_of(u) == expect
                        }) && pd.theta
                            == pf.theta.iter().map(BVec::complement).collect::<BTreeSet<_>>();
                        out.push((
                            "dual_phi_law",
                            ck(ok, "dual state function must complement values and inputs"),
                        ));
                    }
                    (Err(_), Err(_)) => {}
                    _ => out.push((
                        "dual_phi_law",
                        Err("state functions must exist on both or neither side of duality"
                            .to_string()),
                    )),
                }
            }
        }
        Construction::Inverse => {
            let inv = f.inverse();
            let some_bad = f
                .support()
                .iter()
                .any(|u| u.initial_value().is_none());
            let inv_level = levels(&inv, Side::Initial);
            out.push((
                "inverse_admissible_inputs_are_signals",
                ck(
                    !(some_bad && inv_level > StateLevel::None),
                    "if the inverse has initial states, every admissible input has one",
                ),
            ));
            for side in [Side::Initial, Side::Final] {
                if let Ok(pi) = state_function(&inv, side) {
                    let lim = |s: &Signal| -> Option<BVec> {
                        match side {
                            Side::Initial => s.initial_value().cloned(),
                            Side::Final => s.final_value().cloned(),
                        }
                    };
                    let mut ok = true;
                    for x in f.states() {
                        let expect: BTreeSet<BVec> = f
                            .inputs()
                            .iter()
                            .filter(|u| f.relates(u, x))
                            .map(|u| lim(u).expect("state function checked the limit").clone())
                            .collect();
                        if pi.phi_of(x) != expect {
                            ok = false;
                        }
                    }
                    let theta: BTreeSet<BVec> = f
                        .support()
                        .iter()
                        .map(|u| lim(u).expect("state function checked the limit").clone())
                        .collect();
                    out.push((
                        "inverse_phi_formula",
                        ck(
                            ok && pi.theta == theta,
                            "inverse state function must collect input limits",
                        ),
                    ));
                }
            }
        }
        Construction::Product => {
            let f2 = other.expect("product transfer needs the second factor");
            let prod = f.product(f2);
            for side in [Side::Initial, Side::Final] {
                if !f.is_null() && !f2.is_null() {
                    let lp = boundary_report(&prod, side);
                    let la = boundary_report(f, side);
                    let lb = boundary_report(f2, side);
                    out.push((
                        "product_levels_iff",
                        ck(
                            lp.state_level == la.state_level.min(lb.state_level)
                                && lp.time_level == la.time_level.min(lb.time_level),
                            "product classification must be the meet of the factors",
                        ),
                    ));
                }
                if let (Ok(pa), Ok(pb)) = (state_function(f, side), state_function(f2, side)) {
                    if let Ok(pp) = state_function(&prod, side) {
                        let mut ok = true;
                        for u in f.inputs() {
                            for v in f2.inputs() {
                                let expect: BTreeSet<BVec> = pa
                                    .phi_of(u)
                                    .iter()
                                    .flat_map(|a| {
                                        pb.phi_of(v).iter().map(|b| a.concat(b)).collect::<Vec<_>>()
                                    })
                                    .collect();
                                if pp.phi_of(&Signal::concat(u, v)) != expect {
                                    ok = false;
                                }
                            }
                        }
                        let theta: BTreeSet<BVec> = pa
                            .theta
                            .iter()
                            .flat_map(|a| pb.theta.iter().map(|b| a.concat(b)).collect::<Vec<_>>())
                            .collect();
                        out.push((
                            "product_phi_law",
                            ck(
                                ok && pp.theta == theta,
                                "product state function must be the pairing of the factors",
                            ),
                        ));
                    } else {
                        out.push((
                            "product_phi_law",
                            Err("product state function must exist when both factors have one"
                                .to_string()),
                        ));
                    }
                }
            }
        }
        Construction::Serial => {
            let h = f;
            let inner = other.expect("serial transfer needs the inner map");
            let ser = PseudoSystem::serial(h, inner)?;
            for side in [Side::Initial, Side::Final] {
                let lh = boundary_report(h, side);
                let ls = boundary_report(&ser, side);
                out.push((
                    "serial_inherits_has_states",
                    ck(
                        !(lh.state_level >= StateLevel::HasStates
                            && ls.state_level < StateLevel::HasStates),
                        "the composition keeps limits when the outer map has them",
                    ),
                ));
                out.push((
                    "serial_inherits_constant",
                    ck(
                        !(lh.state_level == StateLevel::Constant
                            && ls.state_level != StateLevel::Constant),
                        "a constant outer map forces a constant composition",
                    ),
                ));
                if lh.state_level == StateLevel::Constant && !ser.is_null() {
                    out.push((
                        "serial_constant_value",
                        ck(
                            ls.constant_value == lh.constant_value,
                            "the composition inherits the outer constant value",
                        ),
                    ));
                }
                if let Ok(ph) = state_function(h, side) {
                    let ps = state_function(&ser, side).expect(
                        "composition states are a subset of the outer map's reached states",
                    );
                    let mut ok = true;
                    for u in inner.inputs() {
                        let mut expect: BTreeSet<BVec> = BTreeSet::new();
                        for x in inner.apply(u) {
                            expect.extend(ph.phi_of(x));
                        }
                        if ps.phi_of(u) != expect {
                            ok = false;
                        }
                    }
                    out.push((
                        "serial_delta_formula",
                        ck(
                            ok,
                            "composition state function must union the outer one over images",
                        ),
                    ));
                }
            }
        }
        Construction::Intersect => {
            let g = other.expect("intersection transfer needs the second map");
            let i = f.intersect(g)?;
            for side in [Side::Initial, Side::Final] {
                let li = boundary_report(&i, side);
                let la = boundary_report(f, side);
                let lb = boundary_report(g, side);
                out.push((
                    "intersect_inherits_levels",
                    ck(
                        li.state_level >= la.state_level.max(lb.state_level)
                            && li.time_level >= la.time_level.max(lb.time_level),
                        "intersection keeps each operand's properties",
                    ),
                ));
                if let (Ok(pa), Ok(pb)) = (state_function(f, side), state_function(g, side)) {
                    if let Ok(pi) = state_function(&i, side) {
                        let ok = i.inputs().iter().all(|u| {
                            pi.phi_of(u)
                                .is_subset(
                                    &pa.phi_of(u).intersection(&pb.phi_of(u)).cloned().collect(),
                                )
                        });
                        out.push((
                            "intersect_phi_inclusion",
                            ck(ok, "intersection state function lies below the pointwise meet"),
                        ));
                    }
                }
            }
        }
        Construction::Union => {
            let g = other.expect("union transfer needs the second map");
            let un = f.union(g)?;
            for side in [Side::Initial, Side::Final] {
                let lu = boundary_report(&un, side);
                let la = boundary_report(f, side);
                let lb = boundary_report(g, side);
                out.push((
                    "union_has_states",
                    ck(
                        !(la.state_level >= StateLevel::HasStates
                            && lb.state_level >= StateLevel::HasStates
                            && lu.state_level < StateLevel::HasStates),
                        "a union of limit-possessing maps keeps its limits",
                    ),
                ));
                let common_constant = la.state_level == StateLevel::Constant
                    && lb.state_level == StateLevel::Constant
                    && (la.constant_value == lb.constant_value
                        || la.constant_value.is_none()
                        || lb.constant_value.is_none());
                out.push((
                    "union_common_constant",
                    ck(
                        !(common_constant && lu.state_level != StateLevel::Constant),
                        "a shared constant survives the union",
                    ),
                ));
                if let (Ok(pa), Ok(pb)) = (state_function(f, side), state_function(g, side)) {
                    let pu = state_function(&un, side)
                        .expect("union states all have limits when both operands' do");
                    let ok = un.inputs().iter().all(|u| {
                        let expect: BTreeSet<BVec> =
                            pa.phi_of(u).union(&pb.phi_of(u)).cloned().collect();
                        pu.phi_of(u) == expect
                    }) && pu.theta
                        == pa.theta.union(&pb.theta).cloned().collect::<BTreeSet<_>>();
                    out.push((
                        "union_phi_law",
                        ck(ok, "union state function must be the pointwise join"),
                    ));
                }
                // Witness rule for the extremal instants of the union.
                let find = |r: &crate::properties::BoundaryReport, u: &Signal| {
                    r.per_input
                        .iter()
                        .find(|e| &e.input == u)
                        .and_then(|e| e.extremal_instant)
                };
                let mut ok = true;
                for u in un.inputs() {
                    if let (Some(ta), Some(tb)) = (find(&la, u), find(&lb, u)) {
                        let tu = find(&lu, u);
                        let expect = match side {
                            Side::Initial => ta.min(tb),
                            Side::Final => ta.max(tb),
                        };
                        if tu != Some(expect) {
                            ok = false;
                        }
                    }
                }
                out.push((
                    "union_extremal_instants",
                    ck(
                        ok,
                        "union instants must be the min (initial) or max (final) of the operands",
                    ),
                ));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Lattice conformance of single reports.

fn conformance_checks(f: &PseudoSystem) -> Vec<(&'static str, Check)> {
    let mut out: Vec<(&'static str, Check)> = Vec::new();
    for side in [Side::Initial, Side::Final] {
        let r = boundary_report(f, side);
        out.push((
            "report_cell_conformance",
            ck(
                r.check_conformance(),
                "classification cell must match the state/time levels",
            ),
        ));
        if r.state_level >= StateLevel::RaceFree {
            if let Ok(p) = state_function(f, side) {
                out.push((
                    "race_free_phi_singleton",
                    ck(
                        p.phi.iter().all(|(_, set)| set.len() <= 1),
                        "race-free maps answer each input with at most one limit",
                    ),
                ));
                if r.state_level == StateLevel::Constant {
                    out.push((
                        "constant_theta",
                        ck(
                            p.theta.len() <= 1,
                            "constant maps have at most one limit overall",
                        ),
                    ));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Suite drivers.

fn drive(
    seed: u64,
    iters: u64,
    deadline: Option<Instant>,
    mut body: impl FnMut(&mut ChaCha8Rng) -> Vec<(&'static str, Check)>,
) -> LawOutcome {
    let mut outcome = LawOutcome::default();
    for index in 0..iters {
        if let Some(d) = deadline {
            if Instant::now() >= d {
                break;
            }
        }
        let mut rng = iteration_rng(seed, index);
        for (law, res) in body(&mut rng) {
            match res {
                Ok(()) => *outcome.counters.entry(law).or_insert(0) += 1,
                Err(detail) => {
                    outcome.failure = Some(LawFailure {
                        law,
                        iteration: index,
                        detail,
                    });
                    return outcome;
                }
            }
        }
        outcome.iterations += 1;
    }
    outcome
}

/// The operator-identity suite.
pub fn run_identity_suite(seed: u64, iters: u64, deadline: Option<Instant>) -> LawOutcome {
    drive(seed, iters, deadline, |rng| {
        let mut checks = identity_checks(rng);
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=2);
        let f = gen_ps(rng, m, n, false, false);
        checks.extend(conformance_checks(&f));
        checks
    })
}

/// The property-transfer suite.
pub fn run_transfer_suite(seed: u64, iters: u64, deadline: Option<Instant>) -> LawOutcome {
    drive(seed, iters, deadline, |rng| {
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=2);
        let n2 = rng.gen_range(1..=2);
        let p = rng.gen_range(1..=2);
        let (g1, g2) = gen_shared_pair(rng, m, n, false, false);
        let fsub = sub_of(rng, &g2);
        let f2 = gen_ps(rng, m, n2, false, false);
        let h = gen_ps(rng, n, p, false, false);

        let mut checks: Vec<(&'static str, Check)> = Vec::new();
        let push = |cs: Vec<(&'static str, Check)>, checks: &mut Vec<_>| {
            checks.extend(cs);
        };
        push(
            check_transfer_laws(&fsub, Some(&g2), Construction::Subsystem).unwrap(),
            &mut checks,
        );
        push(check_transfer_laws(&g1, None, Construction::Dual).unwrap(), &mut checks);
        push(
            check_transfer_laws(&g1, None, Construction::Inverse).unwrap(),
            &mut checks,
        );
        push(
            check_transfer_laws(&g1, Some(&f2), Construction::Product).unwrap(),
            &mut checks,
        );
        push(
            check_transfer_laws(&h, Some(&g1), Construction::Serial).unwrap(),
            &mut checks,
        );
        push(
            check_transfer_laws(&g1, Some(&g2), Construction::Intersect).unwrap(),
            &mut checks,
        );
        push(
            check_transfer_laws(&g1, Some(&g2), Construction::Union).unwrap(),
            &mut checks,
        );
        checks.extend(conformance_checks(&g1));
        checks
    })
}
