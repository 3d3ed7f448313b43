//! Rhombic tilings, snakes, braid moves and flips: the combinatorial shadow
//! of a line arrangement, in exact integer coordinates.
//!
//! Base vectors xi_j = (j - floor(T/2), 1). Every vertex is a partial sum of
//! distinct xi's, so its height counts the lines it lies below.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::arrangement::{FormalWord, SweepResult};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::spectrum::Spectrum;

/// xi_j for 1-based j.
pub fn xi(j: usize, t: usize) -> (i64, i64) {
    (j as i64 - (t / 2) as i64, 1)
}

/// A tiling vertex: integer position and the cell spectrum it encodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingVertex {
    pub position: (i64, i64),
    pub spectrum: Spectrum,
}

/// Polygonal chain V_1 ... V_{T+1} of suffix sums of a permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snake {
    vertices: Vec<(i64, i64)>,
    perm: Perm,
}

impl Snake {
    /// Snake of a permutation: V_k = xi_{perm(k)} + ... + xi_{perm(T)},
    /// V_{T+1} = 0.
    pub fn of_permutation(perm: &Perm, t: usize) -> Snake {
        assert_eq!(perm.len(), t);
        let mut vertices = vec![(0i64, 0i64); t + 1];
        for k in (0..t).rev() {
            let x = xi(perm.at(k) + 1, t);
            vertices[k] = (vertices[k + 1].0 + x.0, vertices[k + 1].1 + x.1);
        }
        Snake {
            vertices,
            perm: perm.clone(),
        }
    }

    /// Rebuild a snake from raw vertices, validating that it is a chain of
    /// distinct xi steps ending at the origin.
    pub fn from_vertices(vertices: Vec<(i64, i64)>, t: usize) -> Result<Snake> {
        if vertices.len() != t + 1 {
            return Err(Error::MalformedSnake(format!(
                "expected {} vertices, got {}",
                t + 1,
                vertices.len()
            )));
        }
        if *vertices.last().unwrap() != (0, 0) {
            return Err(Error::MalformedSnake(
                "last vertex must be the origin".into(),
            ));
        }
        let mut seq = Vec::with_capacity(t);
        let mut seen = vec![false; t];
        for k in 0..t {
            let step = (
                vertices[k].0 - vertices[k + 1].0,
                vertices[k].1 - vertices[k + 1].1,
            );
            if step.1 != 1 {
                return Err(Error::MalformedSnake(format!(
                    "step {step:?} at height {} is not a base vector",
                    t - k
                )));
            }
            let j = step.0 + (t / 2) as i64;
            if j < 1 || j > t as i64 {
                return Err(Error::MalformedSnake(format!("step {step:?} out of range")));
            }
            let v = (j - 1) as usize;
            if seen[v] {
                return Err(Error::MalformedSnake(format!("base vector {j} used twice")));
            }
            seen[v] = true;
            seq.push(v);
        }
        Ok(Snake {
            vertices,
            perm: Perm::from_seq(seq),
        })
    }

    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    pub fn permutation(&self) -> &Perm {
        &self.perm
    }

    /// Vertex at height h (number of 1-bits), h in 0..=T.
    pub fn vertex_at_height(&self, h: usize) -> (i64, i64) {
        let t = self.vertices.len() - 1;
        self.vertices[t - h]
    }
}

/// One rhombus of the tiling, created by the crossing at a word letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rhombus {
    /// 1-based position letter of the crossing.
    pub letter: usize,
    /// [V_k(before), V_{k+1}(before), V_{k+2}(before), V_{k+1}(after)].
    pub vertices: [(i64, i64); 4],
}

/// The tiling: one snake per sweep sector and one rhombus per crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhombicTiling {
    t: usize,
    word: FormalWord,
    permutations: Vec<Perm>,
    snakes: Vec<Snake>,
    rhombi: Vec<Rhombus>,
}

/// Build the tiling determined by a formal word.
pub fn tiling_from_word(word: &FormalWord, t: usize) -> Result<RhombicTiling> {
    let mut permutations = vec![Perm::identity(t)];
    for &letter in word.letters() {
        if letter == 0 || letter >= t {
            return Err(Error::Validation(format!(
                "word letter {letter} outside 1..{t}"
            )));
        }
        let next = permutations.last().unwrap().swap_positions(letter - 1);
        permutations.push(next);
    }
    let snakes: Vec<Snake> = permutations
        .iter()
        .map(|p| Snake::of_permutation(p, t))
        .collect();
    let mut rhombi = Vec::with_capacity(word.len());
    for (i, &letter) in word.letters().iter().enumerate() {
        let before = &snakes[i];
        let after = &snakes[i + 1];
        let k = letter - 1; // 0-based vertex index of V_letter
        rhombi.push(Rhombus {
            letter,
            vertices: [
                before.vertices[k],
                before.vertices[k + 1],
                before.vertices[k + 2],
                after.vertices[k + 1],
            ],
        });
    }
    Ok(RhombicTiling {
        t,
        word: word.clone(),
        permutations,
        snakes,
        rhombi,
    })
}

/// Build the tiling of a sweep; sectors become snakes, crossings rhombi.
pub fn build_tiling(sweep: &SweepResult) -> Result<RhombicTiling> {
    let tiling = tiling_from_word(&sweep.word, sweep.t)?;
    debug_assert_eq!(tiling.permutations, sweep.permutations);
    Ok(tiling)
}

impl RhombicTiling {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn word(&self) -> &FormalWord {
        &self.word
    }

    pub fn snakes(&self) -> &[Snake] {
        &self.snakes
    }

    pub fn rhombi(&self) -> &[Rhombus] {
        &self.rhombi
    }

    pub fn boundary_snakes(&self) -> (&Snake, &Snake) {
        (self.snakes.first().unwrap(), self.snakes.last().unwrap())
    }

    /// All distinct vertices with their spectra (prefix sets of sector
    /// permutations).
    pub fn vertices(&self) -> Vec<TilingVertex> {
        let mut seen: HashMap<(i64, i64), Spectrum> = HashMap::new();
        let mut order: Vec<(i64, i64)> = Vec::new();
        for perm in &self.permutations {
            let snake = Snake::of_permutation(perm, self.t);
            for k in 0..=self.t {
                let pos = snake.vertices[k];
                if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(pos) {
                    // Vertex k holds the suffix set perm[k..].
                    let ones: Vec<usize> = (k..self.t).map(|i| perm.at(i)).collect();
                    slot.insert(Spectrum::from_ones(self.t, &ones));
                    order.push(pos);
                }
            }
        }
        order
            .into_iter()
            .map(|position| TilingVertex {
                spectrum: seen[&position].clone(),
                position,
            })
            .collect()
    }
}

/// The output order: lambda sorts outputs strictly decreasing. Ties are
/// broken by the smaller time index first and flagged.
pub fn output_order(y: &[f64]) -> (Perm, bool) {
    let mut idx: Vec<usize> = (0..y.len()).collect();
    idx.sort_by(|&a, &b| y[b].partial_cmp(&y[a]).unwrap().then(a.cmp(&b)));
    let tie = idx.windows(2).any(|w| y[w[0]] == y[w[1]]);
    (Perm::from_seq(idx), tie)
}

/// True iff the snake is one of the tiling's sector snakes.
pub fn snake_in_tiling(tiling: &RhombicTiling, snake: &Snake) -> bool {
    tiling.snakes.iter().any(|s| s.vertices == snake.vertices)
}

/// True iff every vertex of the snake lies in the closed region between the
/// two boundary snakes, tested per height level: boundary snakes carry the
/// extreme prefix sums at each height.
pub fn snake_in_region(tiling: &RhombicTiling, snake: &Snake) -> Result<bool> {
    let t = tiling.t;
    if snake.vertices.len() != t + 1 {
        return Err(Error::MalformedSnake(format!(
            "snake has {} vertices, tiling needs {}",
            snake.vertices.len(),
            t + 1
        )));
    }
    for (k, v) in snake.vertices.iter().enumerate() {
        if v.1 != (t - k) as i64 {
            return Err(Error::MalformedSnake(format!(
                "vertex {v:?} at index {k} has height {} instead of {}",
                v.1,
                t - k
            )));
        }
    }
    let (first, last) = tiling.boundary_snakes();
    for h in 0..=t {
        let x = snake.vertex_at_height(h).0;
        let a = first.vertex_at_height(h).0;
        let b = last.vertex_at_height(h).0;
        if x < a.min(b) || x > a.max(b) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    /// Swap two adjacent letters with |difference| >= 2.
    Commute,
    /// Rewrite s_t s_{t+1} s_t <-> s_{t+1} s_t s_{t+1}.
    Braid3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BraidMove {
    pub position: usize,
    pub kind: MoveKind,
}

/// Apply one move at a 0-based position of the word.
pub fn apply_braid_move(word: &FormalWord, position: usize, kind: MoveKind) -> Result<FormalWord> {
    let letters = word.letters();
    match kind {
        MoveKind::Commute => {
            if position + 1 >= letters.len() {
                return Err(Error::InvalidMove {
                    position,
                    reason: "commute needs two letters".into(),
                });
            }
            let (a, b) = (letters[position], letters[position + 1]);
            if a.abs_diff(b) < 2 {
                return Err(Error::InvalidMove {
                    position,
                    reason: format!("letters {a},{b} are adjacent transpositions that overlap"),
                });
            }
            let mut out = letters.to_vec();
            out.swap(position, position + 1);
            FormalWord::new(out, usize::MAX)
        }
        MoveKind::Braid3 => {
            if position + 2 >= letters.len() {
                return Err(Error::InvalidMove {
                    position,
                    reason: "braid move needs three letters".into(),
                });
            }
            let (a, b, c) = (
                letters[position],
                letters[position + 1],
                letters[position + 2],
            );
            let forward = b == a + 1 && c == a;
            let reverse = a == b + 1 && c == b + 1;
            if !forward && !reverse {
                return Err(Error::InvalidMove {
                    position,
                    reason: format!("letters {a},{b},{c} do not match the braid pattern"),
                });
            }
            let mut out = letters.to_vec();
            out[position] = b;
            out[position + 1] = a;
            out[position + 2] = b;
            FormalWord::new(out, usize::MAX)
        }
    }
}

fn neighbors(word: &FormalWord) -> Vec<(BraidMove, FormalWord)> {
    let mut out = Vec::new();
    let n = word.len();
    for position in 0..n {
        for kind in [MoveKind::Commute, MoveKind::Braid3] {
            if let Ok(next) = apply_braid_move(word, position, kind) {
                out.push((BraidMove { position, kind }, next));
            }
        }
    }
    out
}

/// Maximum word length for which an explicit move sequence is searched.
pub const WORDS_CONNECTED_BFS_CAP: usize = 10;

/// Decide whether two words are connected by commute/braid moves, returning
/// an explicit move sequence for words up to [`WORDS_CONNECTED_BFS_CAP`]
/// letters. Words must have equal permutation images (`sigma`).
pub fn words_connected(
    w1: &FormalWord,
    w2: &FormalWord,
    sigma: &Perm,
    t: usize,
) -> Result<(bool, Option<Vec<BraidMove>>)> {
    if &w1.permutation(t) != sigma || &w2.permutation(t) != sigma {
        return Err(Error::NotComparable);
    }
    if w1 == w2 {
        return Ok((true, Some(Vec::new())));
    }
    if w1.len() != w2.len() {
        // Moves preserve length; nothing to search.
        return Ok((false, None));
    }
    if w1.len() > WORDS_CONNECTED_BFS_CAP {
        // Connectivity holds for arrangement words with a common image; the
        // explicit sequence is diagnostic only and capped.
        return Ok((true, None));
    }
    let mut visited: HashSet<Vec<usize>> = HashSet::new();
    let mut parent: HashMap<Vec<usize>, (Vec<usize>, BraidMove)> = HashMap::new();
    let mut queue = VecDeque::new();
    visited.insert(w1.letters().to_vec());
    queue.push_back(w1.clone());
    while let Some(cur) = queue.pop_front() {
        for (mv, next) in neighbors(&cur) {
            let key = next.letters().to_vec();
            if visited.contains(&key) {
                continue;
            }
            visited.insert(key.clone());
            parent.insert(key.clone(), (cur.letters().to_vec(), mv));
            if next == *w2 {
                let mut seq = Vec::new();
                let mut node = key;
                while node != w1.letters() {
                    let (prev, mv) = parent[&node].clone();
                    seq.push(mv);
                    node = prev;
                }
                seq.reverse();
                return Ok((true, Some(seq)));
            }
            queue.push_back(next);
        }
    }
    Ok((false, None))
}

/// Flip the tiling at an interior hexagon vertex. The vertex must admit the
/// six-neighbor configuration; commutation moves (which do not change the
/// tiling) are searched to bring the three crossings of the hexagon
/// together, then one braid move is applied.
pub fn flip(tiling: &RhombicTiling, hexagon: (i64, i64)) -> Result<RhombicTiling> {
    let cap = 10_000;
    let mut visited: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    visited.insert(tiling.word.letters().to_vec());
    queue.push_back(tiling.word.clone());
    while let Some(word) = queue.pop_front() {
        if let Some(position) = braid3_at_vertex(&word, tiling.t, hexagon) {
            let flipped = apply_braid_move(&word, position, MoveKind::Braid3)?;
            return tiling_from_word(&flipped, tiling.t);
        }
        if visited.len() >= cap {
            break;
        }
        for position in 0..word.len() {
            if let Ok(next) = apply_braid_move(&word, position, MoveKind::Commute) {
                let key = next.letters().to_vec();
                if visited.insert(key) {
                    queue.push_back(next);
                }
            }
        }
    }
    Err(Error::NotFlippable(hexagon))
}

/// Position of a contiguous braid pattern whose flip removes `vertex`.
fn braid3_at_vertex(word: &FormalWord, t: usize, vertex: (i64, i64)) -> Option<usize> {
    let letters = word.letters();
    let mut perm = Perm::identity(t);
    let mut perms = vec![perm.clone()];
    for &l in letters {
        perm = perm.swap_positions(l - 1);
        perms.push(perm.clone());
    }
    for i in 0..letters.len().saturating_sub(2) {
        let (a, b, c) = (letters[i], letters[i + 1], letters[i + 2]);
        let forward = b == a + 1 && c == a;
        let reverse = a == b + 1 && c == b + 1;
        if !forward && !reverse {
            continue;
        }
        let p = a.min(b) - 1; // 0-based leftmost position of the hexagon
        let pi = &perms[i];
        let mut base = (0i64, 0i64);
        for pos in p + 3..t {
            let x = xi(pi.at(pos) + 1, t);
            base = (base.0 + x.0, base.1 + x.1);
        }
        let va = xi(pi.at(p) + 1, t);
        let vb = xi(pi.at(p + 1) + 1, t);
        let vc = xi(pi.at(p + 2) + 1, t);
        let removed = if forward {
            (base.0 + va.0 + vc.0, base.1 + va.1 + vc.1)
        } else {
            (base.0 + vb.0, base.1 + vb.1)
        };
        if removed == vertex {
            return Some(i);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(letters: &[usize]) -> FormalWord {
        FormalWord::new(letters.to_vec(), usize::MAX).unwrap()
    }

    #[test]
    fn xi_examples() {
        // T = 2: xi_1 = (0,1), xi_2 = (1,1).
        assert_eq!(xi(1, 2), (0, 1));
        assert_eq!(xi(2, 2), (1, 1));
    }

    #[test]
    fn snake_of_identity_and_swap() {
        let id = Snake::of_permutation(&Perm::identity(2), 2);
        assert_eq!(id.vertices(), &[(1, 2), (1, 1), (0, 0)]);
        let swap = Snake::of_permutation(&Perm::from_seq(vec![1, 0]), 2);
        assert_eq!(swap.vertices(), &[(1, 2), (0, 1), (0, 0)]);
    }

    #[test]
    fn snake_matches_suffix_sum_oracle() {
        // T=3, lambda = (3,1,2) one-based.
        let lambda = Perm::from_one_based(&[3, 1, 2]);
        let snake = Snake::of_permutation(&lambda, 3);
        let xs: Vec<(i64, i64)> = (1..=3).map(|j| xi(j, 3)).collect();
        let one_based = lambda.one_based();
        for k in 0..=3 {
            let mut expect = (0, 0);
            for &v in &one_based[k.min(3)..] {
                expect = (expect.0 + xs[v - 1].0, expect.1 + xs[v - 1].1);
            }
            assert_eq!(snake.vertices()[k], expect, "k = {k}");
        }
        assert_eq!(*snake.vertices().last().unwrap(), (0, 0));
    }

    #[test]
    fn from_vertices_round_trip_and_rejects_garbage() {
        let lambda = Perm::from_one_based(&[2, 3, 1]);
        let snake = Snake::of_permutation(&lambda, 3);
        let back = Snake::from_vertices(snake.vertices().to_vec(), 3).unwrap();
        assert_eq!(back.permutation(), &lambda);
        assert!(Snake::from_vertices(vec![(0, 0)], 3).is_err());
        assert!(Snake::from_vertices(vec![(1, 3), (1, 2), (1, 1), (1, 0)], 3).is_err());
    }

    #[test]
    fn output_order_examples() {
        let (l, tie) = output_order(&[3.0, 1.0, 2.0]);
        assert_eq!(l.one_based(), vec![1, 3, 2]);
        assert!(!tie);
        let (l, _) = output_order(&[1.0, 2.0, 3.0]);
        assert_eq!(l.one_based(), vec![3, 2, 1]);
        let (l, tie) = output_order(&[2.0, 2.0]);
        assert_eq!(l.one_based(), vec![1, 2]);
        assert!(tie);
    }

    #[test]
    fn empty_word_tiling_has_single_snake() {
        let tiling = tiling_from_word(&FormalWord::empty(), 2).unwrap();
        assert_eq!(tiling.snakes().len(), 1);
        assert!(tiling.rhombi().is_empty());
    }

    #[test]
    fn crossing_pair_tiling() {
        let tiling = tiling_from_word(&word(&[1]), 2).unwrap();
        assert_eq!(tiling.snakes().len(), 2);
        assert_eq!(tiling.rhombi().len(), 1);
        let mut vs = tiling.rhombi()[0].vertices.to_vec();
        vs.sort();
        assert_eq!(vs, vec![(0, 0), (0, 1), (1, 1), (1, 2)]);
    }

    #[test]
    fn hexagon_flip_changes_word_not_boundaries() {
        let tiling = tiling_from_word(&word(&[1, 2, 1]), 3).unwrap();
        assert_eq!(tiling.rhombi().len(), 3);
        // Interior vertex of the initial tiling: xi_1 + xi_3.
        let interior = (xi(1, 3).0 + xi(3, 3).0, 2);
        let flipped = flip(&tiling, interior).unwrap();
        assert_eq!(flipped.word().letters(), &[2, 1, 2]);
        let (a0, b0) = tiling.boundary_snakes();
        let (a1, b1) = flipped.boundary_snakes();
        assert_eq!(a0, a1);
        assert_eq!(b0, b1);
        // Flip back at the vertex the flip created: xi_2.
        let back = flip(&flipped, xi(2, 3)).unwrap();
        assert_eq!(back.word().letters(), tiling.word().letters());
    }

    #[test]
    fn flip_changes_exactly_one_interior_vertex() {
        let tiling = tiling_from_word(&word(&[1, 2, 1]), 3).unwrap();
        let interior = (xi(1, 3).0 + xi(3, 3).0, 2);
        let flipped = flip(&tiling, interior).unwrap();
        let vs0: HashSet<(i64, i64)> = tiling.vertices().iter().map(|v| v.position).collect();
        let vs1: HashSet<(i64, i64)> = flipped.vertices().iter().map(|v| v.position).collect();
        let removed: Vec<_> = vs0.difference(&vs1).collect();
        let added: Vec<_> = vs1.difference(&vs0).collect();
        assert_eq!(removed, vec![&interior]);
        assert_eq!(added, vec![&xi(2, 3)]);
    }

    #[test]
    fn no_flip_on_two_lines() {
        let tiling = tiling_from_word(&word(&[1]), 2).unwrap();
        assert!(matches!(flip(&tiling, (0, 1)), Err(Error::NotFlippable(_))));
    }

    #[test]
    fn snake_in_tiling_examples() {
        let tiling = tiling_from_word(&word(&[1]), 2).unwrap();
        let id = Snake::of_permutation(&Perm::identity(2), 2);
        assert!(snake_in_tiling(&tiling, &id));
        let swap = Snake::of_permutation(&Perm::from_seq(vec![1, 0]), 2);
        assert!(snake_in_tiling(&tiling, &swap));

        let nested = tiling_from_word(&FormalWord::empty(), 2).unwrap();
        assert!(snake_in_tiling(&nested, &id));
        assert!(!snake_in_tiling(&nested, &swap));
    }

    #[test]
    fn region_membership() {
        // Degenerate region: single snake, swap outside.
        let nested = tiling_from_word(&FormalWord::empty(), 2).unwrap();
        let swap = Snake::of_permutation(&Perm::from_seq(vec![1, 0]), 2);
        assert!(!snake_in_region(&nested, &swap).unwrap());
        // Full reversal at T=3: the region is the whole zonogon.
        let full = tiling_from_word(&word(&[1, 2, 1]), 3).unwrap();
        let perms3 = [
            vec![1, 2, 3],
            vec![1, 3, 2],
            vec![2, 1, 3],
            vec![2, 3, 1],
            vec![3, 1, 2],
            vec![3, 2, 1],
        ];
        for p in perms3 {
            let s = Snake::of_permutation(&Perm::from_one_based(&p), 3);
            assert!(snake_in_region(&full, &s).unwrap(), "{p:?}");
        }
        // Every sector snake lies in its own region.
        let tiling = tiling_from_word(&word(&[2, 1]), 3).unwrap();
        for s in tiling.snakes() {
            assert!(snake_in_region(&tiling, s).unwrap());
        }
    }

    #[test]
    fn braid_moves() {
        let w = word(&[1, 3]);
        let moved = apply_braid_move(&w, 0, MoveKind::Commute).unwrap();
        assert_eq!(moved.letters(), &[3, 1]);

        let w = word(&[1, 2, 1]);
        let moved = apply_braid_move(&w, 0, MoveKind::Braid3).unwrap();
        assert_eq!(moved.letters(), &[2, 1, 2]);
        let back = apply_braid_move(&moved, 0, MoveKind::Braid3).unwrap();
        assert_eq!(back.letters(), &[1, 2, 1]);

        assert!(matches!(
            apply_braid_move(&word(&[1, 2]), 0, MoveKind::Commute),
            Err(Error::InvalidMove { .. })
        ));
    }

    #[test]
    fn braid_moves_preserve_permutation() {
        let words = [word(&[1, 2, 1]), word(&[1, 3, 2, 1]), word(&[2, 3, 1, 2])];
        for w in words {
            let base = w.permutation(4);
            for position in 0..w.len() {
                for kind in [MoveKind::Commute, MoveKind::Braid3] {
                    if let Ok(next) = apply_braid_move(&w, position, kind) {
                        assert_eq!(next.permutation(4), base);
                    }
                }
            }
        }
    }

    #[test]
    fn words_connected_examples() {
        let sigma = word(&[1, 2, 1]).permutation(3);
        let (ok, seq) = words_connected(&word(&[1, 2, 1]), &word(&[2, 1, 2]), &sigma, 3).unwrap();
        assert!(ok);
        assert_eq!(seq.unwrap().len(), 1);

        let w = word(&[1, 2]);
        let sigma = w.permutation(3);
        let (ok, seq) = words_connected(&w, &w, &sigma, 3).unwrap();
        assert!(ok);
        assert!(seq.unwrap().is_empty());

        let w1 = word(&[1, 3, 2]);
        let w2 = word(&[3, 1, 2]);
        let sigma = w1.permutation(4);
        let (ok, seq) = words_connected(&w1, &w2, &sigma, 4).unwrap();
        assert!(ok);
        let seq = seq.unwrap();
        assert_eq!(seq.len(), 1);
        assert_eq!(seq[0].kind, MoveKind::Commute);

        // Different permutation images: not comparable.
        let other = word(&[1]).permutation(4);
        assert!(matches!(
            words_connected(&w1, &w2, &other, 4),
            Err(Error::NotComparable)
        ));
    }

    #[test]
    fn words_connected_replays_valid_moves() {
        let w1 = word(&[1, 2, 1, 3]);
        let w2 = word(&[2, 1, 2, 3]);
        let sigma = w1.permutation(4);
        assert_eq!(w2.permutation(4), sigma);
        let (ok, seq) = words_connected(&w1, &w2, &sigma, 4).unwrap();
        assert!(ok);
        let mut cur = w1;
        for mv in seq.unwrap() {
            cur = apply_braid_move(&cur, mv.position, mv.kind).unwrap();
        }
        assert_eq!(cur, w2);
    }
}
