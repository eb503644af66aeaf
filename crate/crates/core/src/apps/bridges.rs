//! Bridges (Hashiwokakero): puzzle model, lip layout, the verification
//! program and a small backtracking solver.
//!
//! Lips are unit segments between cells. `H(r, c)` is the top side of cell
//! `(r, c)` (`r` up to `p`), `V(r, c)` its left side (`c` up to `q`).

use std::collections::{BTreeMap, HashMap};

use crate::card::{encoding_pattern, Symbol};
use crate::engine::{run, Instr, PlacementKey, Pos, PosSet, Program, ProgramBuilder, ProverScript, RevealKind, RunOutcome};
use crate::error::{Error, Result};
use crate::graph::{edge, greedy_coloring, Coloring, Edge, Graph};
use crate::random::RandomSource;
use crate::spanning::{verification_rounds, HonestProver};
use crate::subprotocols::{add, copy, multiply, neighbor_count};

/// Largest island count [`solve_bridges`] accepts.
pub const SOLVER_MAX_ISLANDS: usize = 16;

pub type Cell = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgesInstance {
    p: usize,
    q: usize,
    islands: BTreeMap<Cell, u8>,
}

/// A pair of islands that may be joined: same row or column, nothing in
/// between. `a` precedes `b` in row-major order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Link {
    pub a: Cell,
    pub b: Cell,
}

impl Link {
    pub fn horizontal(&self) -> bool {
        self.a.0 == self.b.0
    }

    /// Lips crossed by a bridge along this link.
    pub fn lips(&self) -> Vec<Lip> {
        if self.horizontal() {
            (self.a.1 + 1..=self.b.1).map(|c| Lip::v(self.a.0, c)).collect()
        } else {
            (self.a.0 + 1..=self.b.0).map(|r| Lip::h(r, self.a.1)).collect()
        }
    }

    fn crosses(&self, other: &Link) -> bool {
        let (h, v) = match (self.horizontal(), other.horizontal()) {
            (true, false) => (self, other),
            (false, true) => (other, self),
            _ => return false,
        };
        let (r, c) = (h.a.0, v.a.1);
        h.a.1 < c && c < h.b.1 && v.a.0 < r && r < v.b.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lip {
    pub horizontal: bool,
    pub row: usize,
    pub col: usize,
}

impl Lip {
    pub fn h(row: usize, col: usize) -> Self {
        Lip { horizontal: true, row, col }
    }

    pub fn v(row: usize, col: usize) -> Self {
        Lip { horizontal: false, row, col }
    }

    fn key(&self) -> PlacementKey {
        PlacementKey::Lip { horizontal: self.horizontal, row: self.row, col: self.col }
    }
}

impl std::fmt::Display for Lip {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}-{}", if self.horizontal { 'h' } else { 'v' }, self.row, self.col)
    }
}

impl BridgesInstance {
    pub fn new(p: usize, q: usize, islands: impl IntoIterator<Item = (Cell, u8)>) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::Domain("empty grid".into()));
        }
        let islands: BTreeMap<Cell, u8> = islands.into_iter().collect();
        for (&(r, c), &n) in &islands {
            if r >= p || c >= q || !(1..=8).contains(&n) {
                return Err(Error::Domain(format!("bad island {n} at ({r}, {c})")));
            }
        }
        Ok(BridgesInstance { p, q, islands })
    }

    /// `p` lines of `q` characters, `.` for water and `1`..`8` for islands.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(str::trim_end).filter(|l| !l.is_empty()).collect();
        let q = lines.first().ok_or(Error::Parse { line: 1, msg: "empty grid".into() })?.chars().count();
        let mut islands = Vec::new();
        for (r, line) in lines.iter().enumerate() {
            if line.chars().count() != q {
                return Err(Error::Parse { line: r + 1, msg: format!("expected {q} cells") });
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '.' => {}
                    '1'..='8' => islands.push(((r, c), ch as u8 - b'0')),
                    _ => return Err(Error::Parse { line: r + 1, msg: format!("unexpected {ch:?} in column {}", c + 1) }),
                }
            }
        }
        BridgesInstance::new(lines.len(), q, islands)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in 0..self.p {
            for c in 0..self.q {
                s.push(self.islands.get(&(r, c)).map_or('.', |&n| (b'0' + n) as char));
            }
            s.push('\n');
        }
        s
    }

    pub fn rows(&self) -> usize {
        self.p
    }

    pub fn cols(&self) -> usize {
        self.q
    }

    /// Islands in row-major order; island `i` is vertex `i + 1`.
    pub fn islands(&self) -> Vec<(Cell, u8)> {
        self.islands.iter().map(|(&c, &n)| (c, n)).collect()
    }

    pub fn island(&self, cell: Cell) -> Option<u8> {
        self.islands.get(&cell).copied()
    }

    fn vertex(&self, cell: Cell) -> usize {
        self.islands.range(..cell).count() + 1
    }

    /// Each island joined to the nearest island to its right and below.
    pub fn links(&self) -> Vec<Link> {
        let mut out = Vec::new();
        for &(r, c) in self.islands.keys() {
            if let Some(c2) = (c + 1..self.q).find(|&c2| self.islands.contains_key(&(r, c2))) {
                out.push(Link { a: (r, c), b: (r, c2) });
            }
            if let Some(r2) = (r + 1..self.p).find(|&r2| self.islands.contains_key(&(r2, c))) {
                out.push(Link { a: (r, c), b: (r2, c) });
            }
        }
        out
    }

    /// The public island graph, with the link behind each edge.
    pub fn island_graph(&self) -> Result<(Graph, BTreeMap<Edge, Link>)> {
        let links: BTreeMap<Edge, Link> =
            self.links().into_iter().map(|l| (edge(self.vertex(l.a), self.vertex(l.b)), l)).collect();
        let g = Graph::new(self.islands.len(), links.keys().copied())?;
        Ok((g, links))
    }

    /// Every lip in placement order, boundary lips included.
    pub fn lips(&self) -> Vec<Lip> {
        let mut out: Vec<Lip> = (0..=self.p).flat_map(|r| (0..self.q).map(move |c| Lip::h(r, c))).collect();
        out.extend((0..self.p).flat_map(|r| (0..=self.q).map(move |c| Lip::v(r, c))));
        out
    }

    pub fn is_boundary(&self, lip: &Lip) -> bool {
        if lip.horizontal {
            lip.row == 0 || lip.row == self.p
        } else {
            lip.col == 0 || lip.col == self.q
        }
    }

    /// Top, right, bottom and left lips of a cell.
    pub fn cell_lips(&self, (r, c): Cell) -> [Lip; 4] {
        [Lip::h(r, c), Lip::v(r, c + 1), Lip::h(r + 1, c), Lip::v(r, c)]
    }
}

/// Bridge multiplicities per island pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BridgesSolution {
    bridges: BTreeMap<(Cell, Cell), u8>,
}

impl BridgesSolution {
    pub fn new(bridges: impl IntoIterator<Item = (Cell, Cell, u8)>) -> Result<Self> {
        let mut s = BridgesSolution::default();
        for (a, b, mult) in bridges {
            s.set(a, b, mult)?;
        }
        Ok(s)
    }

    /// Set the multiplicity of a straight bridge between `a` and `b`.
    pub fn set(&mut self, a: Cell, b: Cell, mult: u8) -> Result<()> {
        if a == b || (a.0 != b.0 && a.1 != b.1) {
            return Err(Error::Domain(format!("{a:?} and {b:?} are not in one row or column")));
        }
        if mult > 2 {
            return Err(Error::Domain(format!("multiplicity {mult} exceeds 2")));
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if mult == 0 {
            self.bridges.remove(&key);
        } else {
            self.bridges.insert(key, mult);
        }
        Ok(())
    }

    pub fn get(&self, a: Cell, b: Cell) -> u8 {
        let key = if a < b { (a, b) } else { (b, a) };
        self.bridges.get(&key).copied().unwrap_or(0)
    }

    /// Bridges with nonzero multiplicity.
    pub fn bridges(&self) -> impl Iterator<Item = (Cell, Cell, u8)> + '_ {
        self.bridges.iter().map(|(&(a, b), &m)| (a, b, m))
    }

    /// Lines `r1 c1 r2 c2 mult`, 1-indexed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = BridgesSolution::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(format!("not a number: {t:?}"))))
                .collect::<Result<_>>()?;
            let [r1, c1, r2, c2, mult] = nums[..] else {
                return Err(err("expected \"r1 c1 r2 c2 mult\"".into()));
            };
            if [r1, c1, r2, c2].contains(&0) {
                return Err(err("coordinates are 1-indexed".into()));
            }
            if mult > 2 {
                return Err(err(format!("multiplicity {mult} exceeds 2")));
            }
            s.set((r1 - 1, c1 - 1), (r2 - 1, c2 - 1), mult as u8).map_err(|e| err(e.to_string()))?;
        }
        Ok(s)
    }

    pub fn to_text(&self) -> String {
        self.bridges().map(|((r1, c1), (r2, c2), m)| format!("{} {} {} {} {m}\n", r1 + 1, c1 + 1, r2 + 1, c2 + 1)).collect()
    }

    /// `b(l)` for every lip: the number of bridges crossing it.
    pub fn lip_values(&self) -> HashMap<Lip, usize> {
        let mut out = HashMap::new();
        for (a, b, m) in self.bridges() {
            for lip in (Link { a, b }).lips() {
                *out.entry(lip).or_insert(0) += m as usize;
            }
        }
        out
    }

    /// Oracle check of the puzzle rules.
    pub fn is_valid(&self, inst: &BridgesInstance) -> bool {
        let links = inst.links();
        let mut degree: HashMap<Cell, usize> = HashMap::new();
        let mut used = Vec::new();
        for (a, b, m) in self.bridges() {
            let Some(link) = links.iter().find(|l| l.a == a && l.b == b) else {
                return false;
            };
            *degree.entry(a).or_default() += m as usize;
            *degree.entry(b).or_default() += m as usize;
            used.push(*link);
        }
        let crossing = used.iter().enumerate().any(|(i, x)| used[i + 1..].iter().any(|y| x.crosses(y)));
        let counts = inst.islands().iter().all(|&(c, n)| degree.get(&c).copied().unwrap_or(0) == n as usize);
        !crossing && counts && connected(inst, &used)
    }
}

fn connected(inst: &BridgesInstance, used: &[Link]) -> bool {
    let islands = inst.islands();
    let Some(&(start, _)) = islands.first() else {
        return true;
    };
    let mut seen = vec![start];
    let mut i = 0;
    while i < seen.len() {
        let c = seen[i];
        for l in used {
            let other = if l.a == c { l.b } else if l.b == c { l.a } else { continue };
            if !seen.contains(&other) {
                seen.push(other);
            }
        }
        i += 1;
    }
    seen.len() == islands.len()
}

/// Backtracking solver. Exponential; capped at [`SOLVER_MAX_ISLANDS`].
pub fn solve_bridges(inst: &BridgesInstance) -> Result<Option<BridgesSolution>> {
    let islands = inst.islands();
    if islands.len() > SOLVER_MAX_ISLANDS {
        return Err(Error::Capacity(format!("{} islands, solver limit is {SOLVER_MAX_ISLANDS}", islands.len())));
    }
    let links = inst.links();
    let index: HashMap<Cell, usize> = islands.iter().enumerate().map(|(i, &(c, _))| (c, i)).collect();
    let mut last = vec![None; islands.len()];
    for (j, l) in links.iter().enumerate() {
        last[index[&l.a]] = Some(j);
        last[index[&l.b]] = Some(j);
    }
    let mut search = Search {
        inst,
        links: &links,
        index: &index,
        last: &last,
        remaining: islands.iter().map(|&(_, n)| n as usize).collect(),
        mult: vec![0; links.len()],
    };
    if islands.iter().enumerate().any(|(i, &(_, n))| n > 0 && last[i].is_none()) {
        return Ok(None);
    }
    Ok(search.go(0).then(|| search.solution()))
}

struct Search<'a> {
    inst: &'a BridgesInstance,
    links: &'a [Link],
    index: &'a HashMap<Cell, usize>,
    last: &'a [Option<usize>],
    remaining: Vec<usize>,
    mult: Vec<u8>,
}

impl Search<'_> {
    fn go(&mut self, j: usize) -> bool {
        if j == self.links.len() {
            let used: Vec<Link> = (0..j).filter(|&i| self.mult[i] > 0).map(|i| self.links[i]).collect();
            return self.remaining.iter().all(|&r| r == 0) && connected(self.inst, &used);
        }
        let l = self.links[j];
        let (a, b) = (self.index[&l.a], self.index[&l.b]);
        let blocked = (0..j).any(|i| self.mult[i] > 0 && self.links[i].crosses(&l));
        let top = if blocked { 0 } else { self.remaining[a].min(self.remaining[b]).min(2) };
        for m in (0..=top).rev() {
            self.mult[j] = m as u8;
            self.remaining[a] -= m;
            self.remaining[b] -= m;
            let done = |v: usize, s: &Self| s.last[v] != Some(j) || s.remaining[v] == 0;
            if done(a, self) && done(b, self) && self.go(j + 1) {
                return true;
            }
            self.remaining[a] += m;
            self.remaining[b] += m;
        }
        self.mult[j] = 0;
        false
    }

    fn solution(&self) -> BridgesSolution {
        let bridges = self.links.iter().zip(&self.mult).filter(|(_, &m)| m > 0).map(|(l, &m)| ((l.a, l.b), m)).collect();
        BridgesSolution { bridges }
    }
}

fn e9(x: usize) -> Vec<Symbol> {
    encoding_pattern(x, 9).expect("x < 9")
}

/// The compiled Bridges verification for a public instance.
#[derive(Clone, Debug)]
pub struct BridgesProtocol {
    pub instance: BridgesInstance,
    pub graph: Graph,
    pub coloring: Coloring,
    /// Witness lip of each island-graph edge.
    pub witness: BTreeMap<Edge, Lip>,
    pub program: Program,
}

impl BridgesProtocol {
    pub fn new(inst: &BridgesInstance) -> Result<Self> {
        let (graph, links) = inst.island_graph()?;
        let coloring = greedy_coloring(&graph);
        // The lip next to the smaller island, toward the other one.
        let witness: BTreeMap<Edge, Lip> = links.iter().map(|(&e, l)| (e, l.lips()[0])).collect();
        let mut b = ProgramBuilder::new();

        let mut lips: BTreeMap<Lip, Vec<Pos>> = BTreeMap::new();
        for lip in inst.lips() {
            let mut pos = b.prover_place(3, lip.key());
            pos.extend(b.place(vec![Symbol::Club; 6]));
            lips.insert(lip, pos);
        }
        let islands: Vec<(Cell, Vec<Pos>)> = inst.islands().into_iter().map(|(c, n)| (c, b.place(e9(n as usize)))).collect();

        for (lip, pos) in lips.iter().filter(|(l, _)| inst.is_boundary(l)) {
            let tag = format!("bridges/boundary/{lip}");
            b.turn_over(PosSet::Fixed(pos.clone()), &tag, RevealKind::Known { symbols: e9(0) });
            let check = b.check(format!("{tag}: boundary lip is crossed"));
            b.push(Instr::ExpectSymbols { pos: pos.clone(), symbols: e9(0), check });
            b.turn_down(PosSet::Fixed(pos.clone()));
        }

        // Consuming uses per lip: products at water cells, sums at islands,
        // and extraction at witness lips.
        let cells: Vec<Cell> = (0..inst.p).flat_map(|r| (0..inst.q).map(move |c| (r, c))).collect();
        let mut uses: HashMap<Lip, usize> = HashMap::new();
        for &cell in &cells {
            let l = inst.cell_lips(cell);
            let consumed: &[Lip] = if inst.island(cell).is_some() { &l } else { &l[..2] };
            for lip in consumed {
                *uses.entry(*lip).or_default() += 1;
            }
        }
        for lip in witness.values() {
            *uses.entry(*lip).or_default() += 1;
        }
        let mut pool: HashMap<Lip, Vec<Vec<Pos>>> = HashMap::new();
        for (lip, pos) in lips {
            let u = uses.get(&lip).copied().unwrap_or(0);
            let seqs = if u >= 2 { copy(&mut b, &format!("bridges/copy/{lip}"), pos, u - 1) } else { vec![pos] };
            pool.insert(lip, seqs);
        }
        let peek = |pool: &HashMap<Lip, Vec<Vec<Pos>>>, lip: &Lip| pool[lip][0].clone();
        let take = |pool: &mut HashMap<Lip, Vec<Vec<Pos>>>, lip: &Lip| pool.get_mut(lip).unwrap().pop().unwrap();

        for &(r, c) in cells.iter().filter(|&&cell| inst.island(cell).is_none()) {
            let [l1, l2, l3, l4] = inst.cell_lips((r, c));
            neighbor_count(&mut b, &format!("bridges/cell{r}-{c}/vertical"), &[peek(&pool, &l1), peek(&pool, &l3)], Some(1));
            neighbor_count(&mut b, &format!("bridges/cell{r}-{c}/horizontal"), &[peek(&pool, &l2), peek(&pool, &l4)], Some(1));
        }
        for &(r, c) in cells.iter().filter(|&&cell| inst.island(cell).is_none()) {
            let [l1, l2, _, _] = inst.cell_lips((r, c));
            let ctx = format!("bridges/cell{r}-{c}/product");
            let a = take(&mut pool, &l1);
            let key = take(&mut pool, &l2);
            let prod = multiply(&mut b, &ctx, a, key);
            let zero = b.place(e9(0));
            neighbor_count(&mut b, &ctx, &[prod.clone(), zero.clone()], Some(1));
            b.discard(&prod);
            b.discard(&zero);
        }
        for ((r, c), target_n) in islands {
            let ctx = format!("bridges/island{r}-{c}/sum");
            let [l1, rest @ ..] = inst.cell_lips((r, c));
            let mut sum = take(&mut pool, &l1);
            for lip in rest {
                let a = take(&mut pool, &lip);
                sum = add(&mut b, &ctx, a, sum);
            }
            neighbor_count(&mut b, &ctx, &[sum.clone(), target_n.clone()], Some(1));
            b.discard(&sum);
            b.discard(&target_n);
        }

        let mut commit = BTreeMap::new();
        for (&(u, v), lip) in &witness {
            let seq = take(&mut pool, lip);
            b.discard(&seq[3..]);
            let pair = [seq[1], seq[2]];
            b.push(Instr::ScrambleCards { pos: pair.to_vec() });
            let tag = b.tag(&format!("bridges/extract/{u}-{v}"));
            let check = b.check(format!("bridges/extract/{u}-{v}: no club to show"));
            b.push(Instr::ProverRevealClub { pair, tag, check });
            b.discard(&seq[1..2]);
            commit.insert((u, v), vec![seq[0], seq[2]]);
        }
        for seqs in pool.values() {
            for s in seqs {
                b.discard(s);
            }
        }
        if graph.n() >= 2 {
            verification_rounds(&mut b, &graph, &coloring, &commit);
        }
        for seq in commit.values() {
            b.discard(seq);
        }
        Ok(BridgesProtocol { instance: inst.clone(), graph, coloring, witness, program: b.finish() })
    }

    /// Placements of an honest prover holding `sol`. Lip values above two
    /// cannot be placed on three cards and are reduced mod 3.
    pub fn honest_script(&self, sol: &BridgesSolution) -> Result<ProverScript> {
        let values = sol.lip_values();
        let b = |lip: &Lip| values.get(lip).copied().unwrap_or(0) % 3;
        let h: Vec<Edge> = self.witness.iter().filter(|(_, lip)| b(lip) > 0).map(|(&e, _)| e).collect();
        let prover = HonestProver::new(&self.graph, &self.coloring, &h)?;
        ProverScript::build(&self.program, |key, len| match *key {
            PlacementKey::Lip { horizontal, row, col } => encoding_pattern(b(&Lip { horizontal, row, col }), 3).unwrap(),
            _ => prover.place(key, len),
        })
    }
}

/// Run once with an honest prover holding `sol`.
pub fn verify_bridges(inst: &BridgesInstance, sol: &BridgesSolution, rs: &mut dyn RandomSource) -> Result<RunOutcome> {
    let proto = BridgesProtocol::new(inst)?;
    let script = proto.honest_script(sol)?;
    run(&proto.program, &script, rs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Verdict;
    use crate::random::SeededSource;

    pub(crate) const PUZZLE_7X7: &str = ".1.....\n2..2..1\n.......\n.5.6.1.\n....2.3\n.2.....\n3..4..2\n";

    fn rejection(inst: &BridgesInstance, sol: &BridgesSolution) -> Option<String> {
        let proto = BridgesProtocol::new(inst).unwrap();
        let out = run(&proto.program, &proto.honest_script(sol).unwrap(), &mut SeededSource::new(9)).unwrap();
        match out.verdict {
            Verdict::Accept => None,
            Verdict::Reject { check } => Some(check),
        }
    }

    #[test]
    fn parsing() {
        let inst = BridgesInstance::parse(PUZZLE_7X7).unwrap();
        assert_eq!(inst.islands().len(), 13);
        assert_eq!(inst.to_text(), PUZZLE_7X7);
        assert_eq!(BridgesInstance::parse(".").unwrap().islands().len(), 0);
        assert!(BridgesInstance::parse("..\n.").is_err());
        assert!(BridgesInstance::parse("9.").is_err());
        assert!(BridgesInstance::parse("0.").is_err());
        let sol = BridgesSolution::parse("1 1 1 3 2\n").unwrap();
        assert_eq!(sol.get((0, 2), (0, 0)), 2);
        assert_eq!(BridgesSolution::parse(&sol.to_text()).unwrap(), sol);
        assert!(BridgesSolution::parse("1 1 2 2 1").is_err());
        assert!(BridgesSolution::parse("1 1 1 3 3").is_err());
    }

    #[test]
    fn solver_examples() {
        let pair = BridgesInstance::parse("1.1").unwrap();
        let sol = solve_bridges(&pair).unwrap().unwrap();
        assert_eq!(sol.bridges().collect::<Vec<_>>(), vec![((0, 0), (0, 2), 1)]);
        assert_eq!(solve_bridges(&BridgesInstance::parse("1..").unwrap()).unwrap(), None);
        let many = BridgesInstance::parse(&"1.1.1.1.1\n".repeat(4)).unwrap();
        assert!(matches!(solve_bridges(&many), Err(Error::Capacity(_))));
    }

    #[test]
    fn lip_values_follow_bridges() {
        let sol = BridgesSolution::new([((0, 0), (0, 3), 2), ((0, 3), (2, 3), 1)]).unwrap();
        let v = sol.lip_values();
        assert_eq!(v[&Lip::v(0, 1)], 2);
        assert_eq!(v[&Lip::v(0, 3)], 2);
        assert_eq!(v[&Lip::h(1, 3)], 1);
        assert_eq!(v[&Lip::h(2, 3)], 1);
        assert_eq!(v.len(), 5);
    }

    #[test]
    fn small_verdicts() {
        let inst = BridgesInstance::parse("2.2").unwrap();
        let good = BridgesSolution::new([((0, 0), (0, 2), 2)]).unwrap();
        assert_eq!(rejection(&inst, &good), None);
        let short = BridgesSolution::new([((0, 0), (0, 2), 1)]).unwrap();
        assert!(rejection(&inst, &short).unwrap().contains("sum"));
    }

    #[test]
    fn crossing_is_caught_by_product() {
        let inst = BridgesInstance::parse(".1.\n1.1\n.1.").unwrap();
        let sol = BridgesSolution::new([((0, 1), (2, 1), 1), ((1, 0), (1, 2), 1)]).unwrap();
        assert!(!sol.is_valid(&inst));
        // Oracle: both lips of the center cell carry 1, and 1 * 1 = 1 mod 9.
        let v = sol.lip_values();
        assert_eq!(v[&Lip::h(1, 1)] * v[&Lip::v(1, 2)] % 9, 1);
        assert!(rejection(&inst, &sol).unwrap().contains("cell1-1/product"));
    }
}
