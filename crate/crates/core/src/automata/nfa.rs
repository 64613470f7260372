use std::collections::{HashMap, VecDeque};
use std::fmt::Write;

use super::AutomataError;

/// Index of a letter in a [`LayeredAlphabet`]: `base * 2^tracks + bits`.
pub type Letter = u32;

/// Base letters extended by one bit per variable track.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LayeredAlphabet {
    base: Vec<String>,
    tracks: Vec<String>,
}

impl LayeredAlphabet {
    pub fn new(base: Vec<String>, tracks: Vec<String>) -> Result<Self, AutomataError> {
        for (i, t) in tracks.iter().enumerate() {
            if tracks[..i].contains(t) {
                return Err(AutomataError::DuplicateTrack(t.clone()));
            }
        }
        Ok(LayeredAlphabet { base, tracks })
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn tracks(&self) -> &[String] {
        &self.tracks
    }

    pub fn size(&self) -> usize {
        self.base.len() << self.tracks.len()
    }

    pub fn letter(&self, base: usize, bits: u32) -> Letter {
        ((base << self.tracks.len()) as u32) | bits
    }

    pub fn base_of(&self, l: Letter) -> usize {
        (l >> self.tracks.len()) as usize
    }

    pub fn bits_of(&self, l: Letter) -> u32 {
        l & ((1u32 << self.tracks.len()) - 1)
    }

    pub fn track_index(&self, track: &str) -> Option<usize> {
        self.tracks.iter().position(|t| t == track)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.size() as Letter
    }

    pub(crate) fn with_tracks(&self, tracks: Vec<String>) -> Result<Self, AutomataError> {
        LayeredAlphabet::new(self.base.clone(), tracks)
    }

    /// `base|bits` with one character per track.
    pub fn render(&self, l: Letter) -> String {
        let bits = self.bits_of(l);
        let marks: String = (0..self.tracks.len())
            .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
            .collect();
        format!("{}|{}", self.base[self.base_of(l)], marks)
    }

    /// Encodes base letters (by name) with the given track positions.
    pub fn annotate(&self, word: &[String], marks: &[(&str, usize)]) -> Option<Vec<Letter>> {
        let mut out = Vec::with_capacity(word.len());
        for (pos, name) in word.iter().enumerate() {
            let b = self.base.iter().position(|x| x == name)?;
            let mut bits = 0;
            for (track, at) in marks {
                if *at == pos {
                    bits |= 1 << self.track_index(track)?;
                }
            }
            out.push(self.letter(b, bits));
        }
        Some(out)
    }
}

/// Nondeterministic finite automaton over a layered alphabet.
///
/// States are `0..num_states`; transitions of each state are kept sorted by
/// letter, then target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: LayeredAlphabet,
    trans: Vec<Vec<(Letter, u32)>>,
    initial: Vec<u32>,
    accepting: Vec<bool>,
}

impl Nfa {
    /// Builds an automaton, checking that every state and letter is in range.
    pub fn from_parts(
        alphabet: LayeredAlphabet,
        num_states: usize,
        transitions: impl IntoIterator<Item = (u32, Letter, u32)>,
        initial: impl IntoIterator<Item = u32>,
        accepting: impl IntoIterator<Item = u32>,
    ) -> Result<Self, String> {
        let mut nfa = Nfa {
            trans: vec![Vec::new(); num_states],
            accepting: vec![false; num_states],
            initial: Vec::new(),
            alphabet,
        };
        let in_range = |q: u32| (q as usize) < num_states;
        for (q, l, r) in transitions {
            if !in_range(q) || !in_range(r) {
                return Err(format!("transition {q} -> {r} leaves the state range"));
            }
            if l as usize >= nfa.alphabet.size() {
                return Err(format!("letter {l} is outside the alphabet"));
            }
            nfa.trans[q as usize].push((l, r));
        }
        for q in initial {
            if !in_range(q) {
                return Err(format!("initial state {q} out of range"));
            }
            nfa.initial.push(q);
        }
        for q in accepting {
            if !in_range(q) {
                return Err(format!("accepting state {q} out of range"));
            }
            nfa.accepting[q as usize] = true;
        }
        nfa.normalize();
        Ok(nfa)
    }

    fn normalize(&mut self) {
        for t in &mut self.trans {
            t.sort_unstable();
            t.dedup();
        }
        self.initial.sort_unstable();
        self.initial.dedup();
    }

    pub fn alphabet(&self) -> &LayeredAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn initial(&self) -> &[u32] {
        &self.initial
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepting(&self) -> Vec<u32> {
        (0..self.num_states() as u32)
            .filter(|&q| self.accepting[q as usize])
            .collect()
    }

    pub fn transitions(&self) -> impl Iterator<Item = (u32, Letter, u32)> + '_ {
        self.trans
            .iter()
            .enumerate()
            .flat_map(|(q, ts)| ts.iter().map(move |&(l, r)| (q as u32, l, r)))
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    /// The automaton with no states.
    pub fn empty(alphabet: LayeredAlphabet) -> Nfa {
        Nfa {
            alphabet,
            trans: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
        }
    }

    /// Accepts every letter sequence, including the empty one.
    pub fn universal(alphabet: LayeredAlphabet) -> Nfa {
        let all: Vec<(Letter, u32)> = alphabet.letters().map(|l| (l, 0)).collect();
        Nfa {
            alphabet,
            trans: vec![all],
            initial: vec![0],
            accepting: vec![true],
        }
    }

    /// Accepts every sequence of length at least one.
    pub fn nonempty(alphabet: LayeredAlphabet) -> Nfa {
        let all: Vec<(Letter, u32)> = alphabet.letters().map(|l| (l, 1)).collect();
        Nfa {
            alphabet,
            trans: vec![all.clone(), all],
            initial: vec![0],
            accepting: vec![false, true],
        }
    }

    /// Accepts the sequences marking every track exactly once.
    pub fn valid_tracks(alphabet: LayeredAlphabet) -> Nfa {
        let k = alphabet.tracks().len();
        let full = (1u32 << k) - 1;
        let mut trans = vec![Vec::new(); 1 << k];
        for (mask, out) in trans.iter_mut().enumerate() {
            let mask = mask as u32;
            for l in alphabet.letters() {
                let bits = alphabet.bits_of(l);
                if mask & bits == 0 {
                    out.push((l, mask | bits));
                }
            }
        }
        let mut accepting = vec![false; 1 << k];
        accepting[full as usize] = true;
        Nfa {
            alphabet,
            trans,
            initial: vec![0],
            accepting,
        }
    }

    fn step(&self, from: &[u32], l: Letter) -> Vec<u32> {
        let mut out = Vec::new();
        for &q in from {
            let ts = &self.trans[q as usize];
            let start = ts.partition_point(|&(m, _)| m < l);
            out.extend(ts[start..].iter().take_while(|&&(m, _)| m == l).map(|&(_, r)| r));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        let mut current = self.initial.clone();
        for &l in word {
            current = self.step(&current, l);
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|&q| self.accepting[q as usize])
    }

    /// Drops states that are unreachable or cannot reach acceptance.
    pub fn trim(&self) -> Nfa {
        let n = self.num_states();
        let mut forward = vec![false; n];
        let mut stack: Vec<u32> = self.initial.clone();
        for &q in &stack {
            forward[q as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for &(_, r) in &self.trans[q as usize] {
                if !forward[r as usize] {
                    forward[r as usize] = true;
                    stack.push(r);
                }
            }
        }
        let mut reverse = vec![Vec::new(); n];
        for (q, _, r) in self.transitions() {
            reverse[r as usize].push(q);
        }
        let mut backward = self.accepting.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| backward[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &reverse[q as usize] {
                if !backward[p as usize] {
                    backward[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        let mut renum = vec![u32::MAX; n];
        let mut next = 0;
        for q in 0..n {
            if forward[q] && backward[q] {
                renum[q] = next;
                next += 1;
            }
        }
        let mut out = Nfa {
            alphabet: self.alphabet.clone(),
            trans: vec![Vec::new(); next as usize],
            initial: Vec::new(),
            accepting: vec![false; next as usize],
        };
        for q in 0..n {
            if renum[q] == u32::MAX {
                continue;
            }
            out.accepting[renum[q] as usize] = self.accepting[q];
            for &(l, r) in &self.trans[q] {
                if renum[r as usize] != u32::MAX {
                    out.trans[renum[q] as usize].push((l, renum[r as usize]));
                }
            }
        }
        out.initial = self
            .initial
            .iter()
            .filter(|&&q| renum[q as usize] != u32::MAX)
            .map(|&q| renum[q as usize])
            .collect();
        out.normalize();
        out
    }

    /// Product automaton for the intersection of the two languages.
    pub fn product_intersect(&self, other: &Nfa) -> Result<Nfa, AutomataError> {
        if self.alphabet != other.alphabet {
            return Err(AutomataError::AlphabetMismatch);
        }
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut out = Nfa {
            alphabet: self.alphabet.clone(),
            trans: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
        };
        let mut intern = |p: (u32, u32), out: &mut Nfa, queue: &mut VecDeque<(u32, u32, u32)>| {
            *index.entry(p).or_insert_with(|| {
                out.trans.push(Vec::new());
                out.accepting
                    .push(self.accepting[p.0 as usize] && other.accepting[p.1 as usize]);
                let id = (out.trans.len() - 1) as u32;
                queue.push_back((p.0, p.1, id));
                id
            })
        };
        for &a in &self.initial {
            for &b in &other.initial {
                let id = intern((a, b), &mut out, &mut queue);
                out.initial.push(id);
            }
        }
        while let Some((a, b, from)) = queue.pop_front() {
            let ta = &self.trans[a as usize];
            let tb = &other.trans[b as usize];
            // merge over the letter-sorted transition lists
            let (mut i, mut j) = (0, 0);
            while i < ta.len() && j < tb.len() {
                let (la, lb) = (ta[i].0, tb[j].0);
                if la < lb {
                    i += 1;
                } else if lb < la {
                    j += 1;
                } else {
                    let i_end = i + ta[i..].iter().take_while(|t| t.0 == la).count();
                    let j_end = j + tb[j..].iter().take_while(|t| t.0 == la).count();
                    for &(_, ra) in &ta[i..i_end] {
                        for &(_, rb) in &tb[j..j_end] {
                            let to = intern((ra, rb), &mut out, &mut queue);
                            out.trans[from as usize].push((la, to));
                        }
                    }
                    i = i_end;
                    j = j_end;
                }
            }
        }
        out.normalize();
        Ok(out)
    }

    /// Disjoint union, accepting the union of the languages.
    pub fn union(&self, other: &Nfa) -> Result<Nfa, AutomataError> {
        if self.alphabet != other.alphabet {
            return Err(AutomataError::AlphabetMismatch);
        }
        let off = self.num_states() as u32;
        let mut out = self.clone();
        out.trans.extend(
            other
                .trans
                .iter()
                .map(|ts| ts.iter().map(|&(l, r)| (l, r + off)).collect()),
        );
        out.accepting.extend_from_slice(&other.accepting);
        out.initial.extend(other.initial.iter().map(|q| q + off));
        out.normalize();
        Ok(out)
    }

    /// Subset construction, completed with a sink, with acceptance flipped.
    ///
    /// The result is deterministic and complete and accepts exactly the letter
    /// sequences rejected by `self`. Fails once more than `cap` subsets appear.
    pub fn determinize_complement(&self, cap: usize) -> Result<Nfa, AutomataError> {
        let letters = self.alphabet.size();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut subsets: Vec<Vec<u32>> = Vec::new();
        let mut out = Nfa {
            alphabet: self.alphabet.clone(),
            trans: Vec::new(),
            initial: vec![0],
            accepting: Vec::new(),
        };
        let start = self.initial.clone();
        index.insert(start.clone(), 0);
        subsets.push(start);
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); letters];
        let mut at = 0;
        while at < subsets.len() {
            let subset = subsets[at].clone();
            out.accepting
                .push(!subset.iter().any(|&q| self.accepting[q as usize]));
            for b in &mut buckets {
                b.clear();
            }
            for &q in &subset {
                for &(l, r) in &self.trans[q as usize] {
                    buckets[l as usize].push(r);
                }
            }
            let mut row = Vec::with_capacity(letters);
            for (l, bucket) in buckets.iter_mut().enumerate() {
                bucket.sort_unstable();
                bucket.dedup();
                let id = match index.get(bucket.as_slice()) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= cap {
                            return Err(AutomataError::StateCap { cap });
                        }
                        let id = subsets.len() as u32;
                        index.insert(bucket.clone(), id);
                        subsets.push(bucket.clone());
                        id
                    }
                };
                row.push((l as Letter, id));
            }
            out.trans.push(row);
            at += 1;
        }
        Ok(out)
    }

    /// Erases `track`: a sequence is accepted iff some marking of that track
    /// extends it to a sequence accepted by `self`.
    pub fn project_exists(&self, track: &str) -> Result<Nfa, AutomataError> {
        let i = self
            .alphabet
            .track_index(track)
            .ok_or_else(|| AutomataError::UnknownTrack(track.to_string()))?;
        let mut tracks = self.alphabet.tracks().to_vec();
        tracks.remove(i);
        let alphabet = self.alphabet.with_tracks(tracks)?;
        let low = (1u32 << i) - 1;
        let old = &self.alphabet;
        let map = |l: Letter| {
            let bits = old.bits_of(l);
            alphabet.letter(old.base_of(l), (bits & low) | ((bits >> (i + 1)) << i))
        };
        let trans = self
            .trans
            .iter()
            .map(|ts| ts.iter().map(|&(l, r)| (map(l), r)).collect())
            .collect();
        let mut out = Nfa {
            alphabet,
            trans,
            initial: self.initial.clone(),
            accepting: self.accepting.clone(),
        };
        out.normalize();
        Ok(out)
    }

    /// Re-expresses the automaton over `tracks`, a superset of its own tracks
    /// in any order. New tracks must be marked exactly once.
    pub fn extend_tracks(&self, tracks: &[String]) -> Result<Nfa, AutomataError> {
        let old = &self.alphabet;
        if old.tracks() == tracks {
            return Ok(self.clone());
        }
        let alphabet = old.with_tracks(tracks.to_vec())?;
        // position in the new track list of each old track
        let positions: Vec<usize> = old
            .tracks()
            .iter()
            .map(|t| {
                alphabet
                    .track_index(t)
                    .ok_or_else(|| AutomataError::MissingTrack(t.clone()))
            })
            .collect::<Result<_, _>>()?;
        let project = |l: Letter| {
            let bits = alphabet.bits_of(l);
            let mut old_bits = 0;
            for (j, &p) in positions.iter().enumerate() {
                old_bits |= ((bits >> p) & 1) << j;
            }
            old.letter(alphabet.base_of(l), old_bits)
        };
        let mut by_old: Vec<Vec<Letter>> = vec![Vec::new(); old.size()];
        for l in alphabet.letters() {
            by_old[project(l) as usize].push(l);
        }
        let trans = self
            .trans
            .iter()
            .map(|ts| {
                ts.iter()
                    .flat_map(|&(l, r)| by_old[l as usize].iter().map(move |&m| (m, r)))
                    .collect()
            })
            .collect();
        let mut widened = Nfa {
            alphabet: alphabet.clone(),
            trans,
            initial: self.initial.clone(),
            accepting: self.accepting.clone(),
        };
        widened.normalize();
        if tracks.len() == old.tracks().len() {
            return Ok(widened);
        }
        Ok(widened
            .product_intersect(&Nfa::valid_tracks(alphabet))?
            .trim())
    }

    /// A shortest accepted sequence, least in letter order among the
    /// shortest, or `None` when the language is empty.
    pub fn is_empty_with_witness(&self) -> Option<Vec<Letter>> {
        let n = self.num_states();
        let mut parent: Vec<Option<(u32, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if !seen[q as usize] {
                seen[q as usize] = true;
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            if self.accepting[q as usize] {
                let mut word = Vec::new();
                let mut at = q;
                while let Some((p, l)) = parent[at as usize] {
                    word.push(l);
                    at = p;
                }
                word.reverse();
                return Some(word);
            }
            for &(l, r) in &self.trans[q as usize] {
                if !seen[r as usize] {
                    seen[r as usize] = true;
                    parent[r as usize] = Some((q, l));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.is_empty_with_witness().is_none()
    }

    /// Debug rendering: header lines, then one transition per line.
    pub fn dump(&self) -> String {
        let join = |v: &[u32]| {
            v.iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::new();
        writeln!(out, "states {}", self.num_states()).unwrap();
        writeln!(out, "initial: {}", join(&self.initial)).unwrap();
        writeln!(out, "accepting: {}", join(&self.accepting())).unwrap();
        for (q, l, r) in self.transitions() {
            writeln!(out, "trans: {q} --({})--> {r}", self.alphabet.render(l)).unwrap();
        }
        out
    }
}
