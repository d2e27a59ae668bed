//! Finite set-valued input/state maps over declared signal universes.
//!
//! A pseudo-system assigns to each input signal a (possibly empty) set of
//! state signals.  The abstract objects act on the infinite space of all
//! signals; here each map carries explicit finite universes, and every
//! operator is relativized to them so that all constructions stay exactly
//! decidable.  Applying a map to a signal outside its input universe yields
//! the empty set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::signal::Signal;

/// A finite relational map from input signals to sets of state signals.
///
/// Universes are kept sorted (structural order on canonical signals), so
/// `==` decides extensional equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PseudoSystem {
    input_dim: usize,
    state_dim: usize,
    inputs: Vec<Signal>,
    states: Vec<Signal>,
    /// input index -> nonempty set of state indices; inputs with empty
    /// image are absent.
    table: BTreeMap<usize, BTreeSet<usize>>,
}

impl PseudoSystem {
    /// Build from universes and relation pairs (indices into the given
    /// vectors, before sorting).
    pub fn new(
        input_dim: usize,
        state_dim: usize,
        inputs: Vec<Signal>,
        states: Vec<Signal>,
        relation: &[(usize, usize)],
    ) -> Result<PseudoSystem> {
        assert!(input_dim > 0 && state_dim > 0);
        for s in &inputs {
            if s.dim() != input_dim {
                return Err(Error::DimensionMismatch {
                    expected: input_dim,
                    found: s.dim(),
                });
            }
        }
        for s in &states {
            if s.dim() != state_dim {
                return Err(Error::DimensionMismatch {
                    expected: state_dim,
                    found: s.dim(),
                });
            }
        }
        let (inputs, input_perm) = sort_universe(inputs, "input")?;
        let (states, state_perm) = sort_universe(states, "state")?;
        let mut table: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (iu, ix) in relation {
            let iu = *input_perm.get(*iu).ok_or(Error::IndexOutOfRange {
                universe: "input",
                index: *iu,
                size: input_perm.len(),
            })?;
            let ix = *state_perm.get(*ix).ok_or(Error::IndexOutOfRange {
                universe: "state",
                index: *ix,
                size: state_perm.len(),
            })?;
            table.entry(iu).or_default().insert(ix);
        }
        Ok(PseudoSystem {
            input_dim,
            state_dim,
            inputs,
            states,
            table,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn inputs(&self) -> &[Signal] {
        &self.inputs
    }

    pub fn states(&self) -> &[Signal] {
        &self.states
    }

    /// Index of a signal in the input universe, if present.
    pub fn input_index(&self, u: &Signal) -> Option<usize> {
        self.inputs.binary_search(u).ok()
    }

    pub fn state_index(&self, x: &Signal) -> Option<usize> {
        self.states.binary_search(x).ok()
    }

    /// Image of an input index.
    pub fn image(&self, iu: usize) -> impl Iterator<Item = usize> + '_ {
        self.table.get(&iu).into_iter().flatten().copied()
    }

    /// `f(u)`: the set of states related to `u`; empty off the universe.
    pub fn apply(&self, u: &Signal) -> Vec<&Signal> {
        match self.input_index(u) {
            Some(iu) => self.image(iu).map(|ix| &self.states[ix]).collect(),
            None => Vec::new(),
        }
    }

    pub fn relates(&self, u: &Signal, x: &Signal) -> bool {
        match (self.input_index(u), self.state_index(x)) {
            (Some(iu), Some(ix)) => self
                .table
                .get(&iu)
                .map(|s| s.contains(&ix))
                .unwrap_or(false),
            _ => false,
        }
    }

    /// The support: inputs with nonempty image.
    pub fn support(&self) -> Vec<&Signal> {
        self.table.keys().map(|iu| &self.inputs[*iu]).collect()
    }

    /// Whether the relation is empty (the null pseudo-system).
    pub fn is_null(&self) -> bool {
        self.table.is_empty()
    }

    /// Relation pairs in sorted order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.table
            .iter()
            .flat_map(|(iu, set)| set.iter().map(move |ix| (*iu, *ix)))
    }

    /// `f` is a subsystem of `g`: `f(u)` is contained in `g(u)` for every
    /// signal `u` (off-universe images are empty).
    pub fn is_subsystem(&self, g: &PseudoSystem) -> Result<bool> {
        self.check_dims(g)?;
        for (iu, set) in &self.table {
            let u = &self.inputs[*iu];
            for ix in set {
                if !g.relates(u, &self.states[*ix]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check_dims(&self, g: &PseudoSystem) -> Result<()> {
        if self.input_dim != g.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                found: g.input_dim,
            });
        }
        if self.state_dim != g.state_dim {
            return Err(Error::DimensionMismatch {
                expected: self.state_dim,
                found: g.state_dim,
            });
        }
        Ok(())
    }

    /// The dual: `x in f*(u)` iff `complement(x) in f(complement(u))`.
    pub fn dual(&self) -> PseudoSystem {
        let inputs: Vec<Signal> = self.inputs.iter().map(Signal::complement).collect();
        let states: Vec<Signal> = self.states.iter().map(Signal::complement).collect();
        let relation: Vec<(usize, usize)> = self.pairs().collect();
        PseudoSystem::new(self.input_dim, self.state_dim, inputs, states, &relation)
            .expect("dual of a valid pseudo-system is valid")
    }

    /// The inverse: swaps the roles of inputs and states.
    pub fn inverse(&self) -> PseudoSystem {
        let relation: Vec<(usize, usize)> = self.pairs().map(|(iu, ix)| (ix, iu)).collect();
        PseudoSystem::new(
            self.state_dim,
            self.input_dim,
            self.states.clone(),
            self.inputs.clone(),
            &relation,
        )
        .expect("inverse of a valid pseudo-system is valid")
    }

    /// The product: inputs are pairings `(u, u')`, states pairings
    /// `(x, x')`, related iff both components are.
    pub fn product(&self, other: &PseudoSystem) -> PseudoSystem {
        let mut inputs = Vec::new();
        for u in &self.inputs {
            for v in &other.inputs {
                inputs.push(Signal::concat(u, v));
            }
        }
        let mut states = Vec::new();
        for x in &self.states {
            for y in &other.states {
                states.push(Signal::concat(x, y));
            }
        }
        let ni = other.inputs.len();
        let ns = other.states.len();
        let mut relation = Vec::new();
        for (iu, ix) in self.pairs() {
            for (ju, jx) in other.pairs() {
                relation.push((iu * ni + ju, ix * ns + jx));
            }
        }
        PseudoSystem::new(
            self.input_dim + other.input_dim,
            self.state_dim + other.state_dim,
            inputs,
            states,
            &relation,
        )
        .expect("product of valid pseudo-systems is valid")
    }

    /// Combine two same-dimension maps over the union of their universes
    /// with a set operation on images.
    fn combine(
        &self,
        other: &PseudoSystem,
        op: impl Fn(&BTreeSet<Signal>, &BTreeSet<Signal>) -> BTreeSet<Signal>,
    ) -> Result<PseudoSystem> {
        self.check_dims(other)?;
        let mut inputs: Vec<Signal> = self.inputs.clone();
        inputs.extend(other.inputs.iter().cloned());
        inputs.sort();
        inputs.dedup();
        let mut states: Vec<Signal> = self.states.clone();
        states.extend(other.states.iter().cloned());
        states.sort();
        states.dedup();
        let mut relation = Vec::new();
        for (iu, u) in inputs.iter().enumerate() {
            let a: BTreeSet<Signal> = self.apply(u).into_iter().cloned().collect();
            let b: BTreeSet<Signal> = other.apply(u).into_iter().cloned().collect();
            for x in op(&a, &b) {
                let ix = states.binary_search(&x).expect("state from either universe");
                relation.push((iu, ix));
            }
        }
        PseudoSystem::new(self.input_dim, self.state_dim, inputs, states, &relation)
    }

    /// The parallel connection `(f, f')`: both maps read the same input and
    /// their responses are paired, `(f,f')(u) = {concat(x,x') : x in f(u),
    /// x' in f'(u)}`, over the union of the input universes.  Requires equal
    /// input dimensions; state dimensions add.
    pub fn parallel(&self, other: &PseudoSystem) -> Result<PseudoSystem> {
        if self.input_dim != other.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                found: other.input_dim,
            });
        }
        let mut inputs: Vec<Signal> = self.inputs.clone();
        inputs.extend(other.inputs.iter().cloned());
        inputs.sort();
        inputs.dedup();
        let mut states = Vec::new();
        for x in &self.states {
            for y in &other.states {
                states.push(Signal::concat(x, y));
            }
        }
        let ns = other.states.len();
        let mut relation = Vec::new();
        for (iu, u) in inputs.iter().enumerate() {
            let a: Vec<usize> = match self.input_index(u) {
                Some(i) => self.image(i).collect(),
                None => Vec::new(),
            };
            let b: Vec<usize> = match other.input_index(u) {
                Some(j) => other.image(j).collect(),
                None => Vec::new(),
            };
            for ix in &a {
                for jx in &b {
                    relation.push((iu, ix * ns + jx));
                }
            }
        }
        PseudoSystem::new(
            self.input_dim,
            self.state_dim + other.state_dim,
            inputs,
            states,
            &relation,
        )
    }

    /// Pointwise intersection of images over the union of the universes.
    pub fn intersect(&self, other: &PseudoSystem) -> Result<PseudoSystem> {
        self.combine(other, |a, b| a.intersection(b).cloned().collect())
    }

    /// Pointwise union of images over the union of the universes.
    pub fn union(&self, other: &PseudoSystem) -> Result<PseudoSystem> {
        self.combine(other, |a, b| a.union(b).cloned().collect())
    }

    /// The serial connection `h . f`: first `f`, then `h` applied to each
    /// intermediate state.  Requires `h`'s input dimension to equal `f`'s
    /// state dimension; `h` contributes nothing for intermediates outside
    /// its universe.
    pub fn serial(h: &PseudoSystem, f: &PseudoSystem) -> Result<PseudoSystem> {
        if h.input_dim != f.state_dim {
            return Err(Error::DimensionMismatch {
                expected: f.state_dim,
                found: h.input_dim,
            });
        }
        let mut relation = Vec::new();
        for (iu, ix) in f.pairs() {
            let x = &f.states[ix];
            if let Some(jm) = h.input_index(x) {
                for jx in h.image(jm) {
                    relation.push((iu, jx));
                }
            }
        }
        PseudoSystem::new(
            f.input_dim,
            h.state_dim,
            f.inputs.clone(),
            h.states.clone(),
            &relation,
        )
    }

    /// The complement relative to this map's own state universe:
    /// `(Cf)(u) = states \ f(u)` for every u in the input universe.
    pub fn complement(&self) -> PseudoSystem {
        let mut relation = Vec::new();
        for iu in 0..self.inputs.len() {
            let image: BTreeSet<usize> = self.image(iu).collect();
            for ix in 0..self.states.len() {
                if !image.contains(&ix) {
                    relation.push((iu, ix));
                }
            }
        }
        PseudoSystem::new(
            self.input_dim,
            self.state_dim,
            self.inputs.clone(),
            self.states.clone(),
            &relation,
        )
        .expect("complement of a valid pseudo-system is valid")
    }

    /// A system: nonempty support, every supported input has an initial
    /// value, and so does every reachable state.
    pub fn is_system(&self) -> bool {
        if self.is_null() {
            return false;
        }
        for (iu, set) in &self.table {
            if self.inputs[*iu].initial_value().is_none() {
                return false;
            }
            for ix in set {
                if self.states[*ix].initial_value().is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// The induced system: restrict to inputs with an initial value whose
    /// image meets the initial-valued states, keeping only those states.
    /// Errors if the restriction is empty.
    pub fn induced_system(&self) -> Result<PseudoSystem> {
        let mut relation = Vec::new();
        for (iu, set) in &self.table {
            if self.inputs[*iu].initial_value().is_none() {
                continue;
            }
            for ix in set {
                if self.states[*ix].initial_value().is_some() {
                    relation.push((*iu, *ix));
                }
            }
        }
        if relation.is_empty() {
            return Err(Error::NoInducedSystem);
        }
        let keep_inputs: BTreeSet<usize> = relation.iter().map(|(iu, _)| *iu).collect();
        let keep_states: BTreeSet<usize> = relation.iter().map(|(_, ix)| *ix).collect();
        let inputs: Vec<Signal> = keep_inputs.iter().map(|i| self.inputs[*i].clone()).collect();
        let states: Vec<Signal> = keep_states.iter().map(|i| self.states[*i].clone()).collect();
        let imap: BTreeMap<usize, usize> =
            keep_inputs.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let smap: BTreeMap<usize, usize> =
            keep_states.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let relation: Vec<(usize, usize)> = relation
            .into_iter()
            .map(|(iu, ix)| (imap[&iu], smap[&ix]))
            .collect();
        PseudoSystem::new(self.input_dim, self.state_dim, inputs, states, &relation)
    }
}

fn sort_universe(mut sigs: Vec<Signal>, which: &'static str) -> Result<(Vec<Signal>, Vec<usize>)> {
    // Stable mapping from original position to sorted position; duplicates
    // (identical canonical signals) are rejected.
    let mut order: Vec<usize> = (0..sigs.len()).collect();
    order.sort_by(|a, b| sigs[*a].cmp(&sigs[*b]));
    for w in order.windows(2) {
        if sigs[w[0]] == sigs[w[1]] {
            return Err(Error::DuplicateUniverseEntry {
                universe: which,
                entry: sigs[w[0]].to_string().replace('\n', "; "),
            });
        }
    }
    let mut perm = vec![0usize; sigs.len()];
    for (new_pos, old_pos) in order.iter().enumerate() {
        perm[*old_pos] = new_pos;
    }
    sigs.sort();
    Ok((sigs, perm))
}

impl fmt::Display for PseudoSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "pseudo-system {}x{}: {} inputs, {} states, {} pairs",
            self.input_dim,
            self.state_dim,
            self.inputs.len(),
            self.states.len(),
            self.pairs().count()
        )
    }
}
