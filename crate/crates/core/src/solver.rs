//! Search for `r` pairwise-disjoint nonempty rainbow faces whose images have
//! a common point.
//!
//! Vertices are assigned in increasing index order, each to an already open
//! part, to a newly opened part, or left unused. Parts are opened in order,
//! so part minima increase and every unordered family is produced exactly
//! once, already in canonical form. Rainbow violations are never generated.
//! With `prune_with_prefix_lp`, a prefix is dropped when the hulls of the
//! largest faces it could still grow into already miss each other.

use std::num::NonZeroUsize;
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::kernel::{common_point, common_point_in};
use crate::model::{Instance, RainbowFace, TverbergWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Only accept families that use every vertex.
    pub require_all_vertices_used: bool,
    /// Stop after this many witnesses (`solve_all` only).
    pub max_solutions: Option<NonZeroUsize>,
    pub prune_with_prefix_lp: bool,
    /// Explore top-level subtrees on the rayon pool. Results do not depend
    /// on the schedule.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            require_all_vertices_used: false,
            max_solutions: None,
            prune_with_prefix_lp: true,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone)]
struct State {
    next: usize,
    parts: Vec<Vec<usize>>,
    part_classes: Vec<Vec<bool>>,
}

struct Search<'a> {
    instance: &'a Instance,
    require_all: bool,
    prune: bool,
}

// Subtrees are split at this depth for parallel runs.
const SPLIT_DEPTH: usize = 4;

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, config: &SearchConfig, prune: bool) -> Self {
        Self {
            instance,
            require_all: config.require_all_vertices_used,
            prune,
        }
    }

    fn root(&self) -> State {
        State {
            next: 0,
            parts: Vec::with_capacity(self.instance.r()),
            part_classes: Vec::with_capacity(self.instance.r()),
        }
    }

    fn viable(&self, state: &State) -> bool {
        let n = self.instance.num_vertices();
        let r = self.instance.r();
        if r - state.parts.len() > n - state.next {
            return false;
        }
        if !self.prune || state.next == n || state.parts.is_empty() {
            return true;
        }
        let coloring = self.instance.coloring();
        let remaining = state.next..n;
        let mut hulls = state
            .parts
            .iter()
            .zip(&state.part_classes)
            .map(|(part, classes)| {
                let mut grown = part.clone();
                grown.extend(remaining.clone().filter(|&u| !classes[coloring.class_of(u)]));
                grown
            })
            .collect::<Vec<_>>();
        if state.parts.len() < r {
            hulls.push(remaining.collect());
        }
        if hulls.len() < 2 {
            return true;
        }
        common_point_in(&hulls, self.instance.points(), self.instance.d())
            .expect("search produces nonempty in-range faces")
            .is_some()
    }

    /// Depth-first walk; `visit` sees every viable state whose next vertex
    /// equals `stop`. With `stop == n` those are exactly the complete
    /// families.
    fn walk<B>(
        &self,
        state: &mut State,
        stop: usize,
        visit: &mut impl FnMut(&State) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if !self.viable(state) {
            return ControlFlow::Continue(());
        }
        if state.next == stop {
            return visit(state);
        }
        let vertex = state.next;
        let class = self.instance.coloring().class_of(vertex);
        state.next += 1;
        for part in 0..state.parts.len() {
            if state.part_classes[part][class] {
                continue;
            }
            state.parts[part].push(vertex);
            state.part_classes[part][class] = true;
            let flow = self.walk(state, stop, visit);
            state.parts[part].pop();
            state.part_classes[part][class] = false;
            flow?;
        }
        if state.parts.len() < self.instance.r() {
            let mut classes = vec![false; self.instance.coloring().num_classes()];
            classes[class] = true;
            state.parts.push(vec![vertex]);
            state.part_classes.push(classes);
            let flow = self.walk(state, stop, visit);
            state.parts.pop();
            state.part_classes.pop();
            flow?;
        }
        if !self.require_all {
            self.walk(state, stop, visit)?;
        }
        state.next -= 1;
        ControlFlow::Continue(())
    }

    fn frontier(&self) -> Vec<State> {
        let stop = SPLIT_DEPTH.min(self.instance.num_vertices());
        let mut states = Vec::new();
        let _ = self.walk::<()>(&mut self.root(), stop, &mut |s| {
            states.push(s.clone());
            ControlFlow::Continue(())
        });
        states
    }

    fn witness_for(&self, family: &[Vec<usize>]) -> Option<TverbergWitness> {
        let found = common_point(family, self.instance).expect("search produces valid faces")?;
        let faces = family
            .iter()
            .map(|f| RainbowFace::new(f.iter().copied()).expect("nonempty part"))
            .collect();
        let witness = TverbergWitness::from_parts(faces, found.point, found.coefficients);
        if let Err(err) = witness.check(self.instance) {
            panic!("solver produced an invalid witness: {err}");
        }
        Some(witness)
    }

    fn first_witness_from(&self, mut state: State) -> Option<TverbergWitness> {
        let n = self.instance.num_vertices();
        match self.walk(&mut state, n, &mut |s| match self.witness_for(&s.parts) {
            Some(w) => ControlFlow::Break(w),
            None => ControlFlow::Continue(()),
        }) {
            ControlFlow::Break(w) => Some(w),
            ControlFlow::Continue(()) => None,
        }
    }

    fn witnesses_from(&self, mut state: State, limit: Option<usize>) -> Vec<TverbergWitness> {
        let n = self.instance.num_vertices();
        let mut found = Vec::new();
        let _ = self.walk::<()>(&mut state, n, &mut |s| {
            if let Some(w) = self.witness_for(&s.parts) {
                found.push(w);
                if limit.is_some_and(|l| found.len() >= l) {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        found
    }
}

/// Calls `visit` on every family of `r` disjoint nonempty rainbow faces, once
/// each, in enumeration order. Faces are sorted and ordered by minimum
/// vertex. The LP prune is never applied here.
pub fn for_each_rainbow_family<B>(
    instance: &Instance,
    config: &SearchConfig,
    mut visit: impl FnMut(&[Vec<usize>]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let search = Search::new(instance, config, false);
    let n = instance.num_vertices();
    search.walk(&mut search.root(), n, &mut |s| visit(&s.parts))
}

pub fn enumerate_rainbow_families(instance: &Instance, config: &SearchConfig) -> Vec<Vec<Vec<usize>>> {
    let mut families = Vec::new();
    let _ = for_each_rainbow_family::<()>(instance, config, |family| {
        families.push(family.to_vec());
        ControlFlow::Continue(())
    });
    families
}

/// First family in enumeration order whose images share a point, packaged
/// as an exactly verified witness.
pub fn solve(instance: &Instance, config: &SearchConfig) -> Option<TverbergWitness> {
    let search = Search::new(instance, config, config.prune_with_prefix_lp);
    if config.parallel {
        search
            .frontier()
            .into_par_iter()
            .find_map_first(|state| search.first_witness_from(state))
    } else {
        search.first_witness_from(search.root())
    }
}

/// Every witness in enumeration order, up to `max_solutions`.
pub fn solve_all(instance: &Instance, config: &SearchConfig) -> Vec<TverbergWitness> {
    let search = Search::new(instance, config, config.prune_with_prefix_lp);
    let limit = config.max_solutions.map(NonZeroUsize::get);
    if config.parallel {
        let mut all = search
            .frontier()
            .into_par_iter()
            .map(|state| search.witnesses_from(state, limit))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect::<Vec<_>>();
        if let Some(limit) = limit {
            all.truncate(limit);
        }
        all
    } else {
        search.witnesses_from(search.root(), limit)
    }
}
