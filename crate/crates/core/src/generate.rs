//! Seeded instance generators.
//!
//! Output depends only on the parameters: coordinates come from a ChaCha8
//! stream seeded with `seed`, and every profile enforces general position
//! by rejection sampling.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kernel::general_position_check;
use crate::model::{base_vertex_count, Coloring, Instance};
use crate::rational::{int, Rational};

pub const DEFAULT_BOUND: i64 = 100;
const MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// `d+1` classes of size `r−1` and one singleton.
    Special,
    /// Every vertex its own class.
    Singletons,
    /// A uniformly shuffled general coloring with random class sizes.
    Random,
    /// `3r` planar points in three classes of `r`.
    PlanarTriangles,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Special => "special",
            Profile::Singletons => "singletons",
            Profile::Random => "random",
            Profile::PlanarTriangles => "bl",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "special" => Ok(Profile::Special),
            "singletons" => Ok(Profile::Singletons),
            "random" => Ok(Profile::Random),
            "bl" => Ok(Profile::PlanarTriangles),
            other => Err(GenerateError::UnknownProfile(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("unknown profile '{0}' (expected special, singletons, random or bl)")]
    UnknownProfile(String),
    #[error("inconsistent parameters: {0}")]
    Inconsistent(String),
    #[error("no point set in general position found after {0} attempts")]
    Exhausted(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub d: usize,
    pub r: usize,
    pub profile: Profile,
    pub seed: u64,
    pub bound: i64,
}

impl GenParams {
    pub fn new(d: usize, r: usize, profile: Profile, seed: u64) -> Self {
        Self {
            d,
            r,
            profile,
            seed,
            bound: DEFAULT_BOUND,
        }
    }
}

fn class_assignment(params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let (d, r) = (params.d, params.r);
    match params.profile {
        Profile::Special => {
            let mut sizes = vec![r - 1; d + 1];
            sizes.push(1);
            Coloring::from_sizes(&sizes)
                .expect("nonempty classes")
                .class_assignment()
                .to_vec()
        }
        Profile::Singletons => (0..base_vertex_count(d, r)).collect(),
        Profile::PlanarTriangles => (0..3).flat_map(|c| std::iter::repeat_n(c, r)).collect(),
        Profile::Random => {
            let n = base_vertex_count(d, r);
            let mut order = (0..n).collect::<Vec<_>>();
            order.shuffle(rng);
            let mut raw = vec![0; n];
            let mut start = 0;
            let mut class = 0;
            while start < n {
                let size = rng.gen_range(1..=(r - 1).min(n - start));
                for &v in &order[start..start + size] {
                    raw[v] = class;
                }
                start += size;
                class += 1;
            }
            // renumber classes by first appearance
            let mut renumber = vec![usize::MAX; class];
            let mut next = 0;
            raw.iter()
                .map(|&c| {
                    if renumber[c] == usize::MAX {
                        renumber[c] = next;
                        next += 1;
                    }
                    renumber[c]
                })
                .collect()
        }
    }
}

/// Generates one instance. Coordinates are integers in `[−bound, bound]`.
pub fn generate(params: &GenParams) -> Result<Instance, GenerateError> {
    let GenParams {
        d, r, bound, profile, ..
    } = *params;
    if d < 1 || r < 2 {
        return Err(GenerateError::Inconsistent(format!(
            "need d ≥ 1 and r ≥ 2, got d={d} r={r}"
        )));
    }
    if bound < 1 {
        return Err(GenerateError::Inconsistent(format!("bound must be ≥ 1, got {bound}")));
    }
    if profile == Profile::PlanarTriangles && d != 2 {
        return Err(GenerateError::Inconsistent(format!("profile bl requires d=2, got d={d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let class_of = class_assignment(params, &mut rng);
    let n = class_of.len();
    for _ in 0..MAX_ATTEMPTS {
        let points: Vec<Vec<Rational>> = (0..n)
            .map(|_| (0..d).map(|_| int(rng.gen_range(-bound..=bound))).collect())
            .collect();
        if general_position_check(&points, d) {
            let coloring = Coloring::from_class_of(class_of).expect("dense classes");
            return Instance::new(d, r, points, coloring)
                .map_err(|e| GenerateError::Inconsistent(e.to_string()));
        }
    }
    Err(GenerateError::Exhausted(MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ColoringKind;

    #[test]
    fn special_profile_shape() {
        let inst = generate(&GenParams::new(2, 3, Profile::Special, 7)).unwrap();
        assert_eq!(inst.num_vertices(), 7);
        assert_eq!(inst.coloring().class_sizes(), vec![2, 2, 2, 1]);
        assert_eq!(inst.classify(), ColoringKind::Special);
    }

    #[test]
    fn planar_triangles_shape() {
        let inst = generate(&GenParams::new(2, 3, Profile::PlanarTriangles, 1)).unwrap();
        assert_eq!(inst.num_vertices(), 9);
        assert_eq!(inst.coloring().class_sizes(), vec![3, 3, 3]);
        assert!(general_position_check(inst.points(), 2));
        assert!(matches!(
            generate(&GenParams::new(3, 3, Profile::PlanarTriangles, 1)),
            Err(GenerateError::Inconsistent(_))
        ));
    }

    #[test]
    fn singletons_shape() {
        let inst = generate(&GenParams::new(1, 3, Profile::Singletons, 3)).unwrap();
        assert_eq!(inst.num_vertices(), 5);
        assert_eq!(inst.coloring().num_classes(), 5);
    }

    #[test]
    fn random_colorings_are_general() {
        for seed in 0..200 {
            for (d, r) in [(1, 3), (2, 3), (1, 4), (2, 2)] {
                let inst = generate(&GenParams::new(d, r, Profile::Random, seed)).unwrap();
                assert!(inst.classify().is_valid(), "seed {seed}: {}", inst.classify());
                let bound = int(DEFAULT_BOUND);
                assert!(inst.points().iter().flatten().all(|x| x.clone() <= bound && -x.clone() <= bound));
            }
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let p = GenParams::new(2, 3, Profile::Random, 42);
        assert_eq!(generate(&p).unwrap(), generate(&p).unwrap());
        let q = GenParams { seed: 43, ..p };
        assert_ne!(generate(&p).unwrap(), generate(&q).unwrap());
    }

    #[test]
    fn tiny_bound_exhausts() {
        let p = GenParams {
            bound: 1,
            ..GenParams::new(2, 3, Profile::PlanarTriangles, 0)
        };
        assert_eq!(generate(&p), Err(GenerateError::Exhausted(MAX_ATTEMPTS)));
    }

    #[test]
    fn profile_names_round_trip() {
        for p in [Profile::Special, Profile::Singletons, Profile::Random, Profile::PlanarTriangles] {
            assert_eq!(p.name().parse::<Profile>().unwrap(), p);
        }
        assert!("rainbow".parse::<Profile>().is_err());
    }
}
