//! Planar-diagram (PD) knot data: parsing, validation, orientation,
//! mirroring and census ingestion.
//!
//! A PD presentation lists each crossing as `X[i,j,k,l]`, reading the four
//! incident edge labels counterclockwise starting from the incoming lower
//! (under) edge.  Edge labels of an `n`-crossing diagram are `1..2n`, each
//! appearing exactly twice.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Syntax error with byte position in the input line.
    Syntax { pos: usize, msg: String },
    /// An edge label does not appear exactly twice.
    LabelMultiplicity { label: u32, count: usize },
    /// The diagram is not connected.
    Disconnected,
    /// The diagram closes up into more than one component (a link, not a knot).
    MultiComponent { components: usize },
    /// No consistent orientation exists (malformed PD).
    InconsistentOrientation,
    /// Empty diagram where one is required.
    Empty,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax { pos, msg } => write!(f, "syntax error at byte {pos}: {msg}"),
            Error::LabelMultiplicity { label, count } => {
                write!(f, "edge label {label} appears {count} times (expected 2)")
            }
            Error::Disconnected => write!(f, "diagram is disconnected"),
            Error::MultiComponent { components } => {
                write!(f, "diagram has {components} components (knots only)")
            }
            Error::InconsistentOrientation => write!(f, "no consistent orientation"),
            Error::Empty => write!(f, "empty diagram"),
        }
    }
}

impl std::error::Error for Error {}

/// One crossing `X[a,b,c,d]`: edge labels counterclockwise from the incoming
/// under-edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing(pub [u32; 4]);

impl Crossing {
    pub fn slots(&self) -> [u32; 4] {
        self.0
    }
}

/// A validated single-component knot diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    id: String,
    crossings: Vec<Crossing>,
}

impl Diagram {
    /// Validate a crossing list: labels are relabeled to `1..2n` order-
    /// preservingly if needed, each label must appear exactly twice, the
    /// diagram must be connected and close into a single component.
    pub fn new(id: impl Into<String>, crossings: Vec<Crossing>) -> Result<Self, Error> {
        if crossings.is_empty() {
            return Err(Error::Empty);
        }
        let n = crossings.len();
        // Count labels; relabel canonically when the label set is not 1..2n.
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for c in &crossings {
            for &e in &c.0 {
                *counts.entry(e).or_insert(0) += 1;
            }
        }
        for (&label, &count) in &counts {
            if count != 2 {
                return Err(Error::LabelMultiplicity { label, count });
            }
        }
        let crossings = if counts.len() == 2 * n
            && counts.keys().next() == Some(&1)
            && counts.keys().next_back() == Some(&(2 * n as u32))
        {
            crossings
        } else {
            // Order-preserving canonical relabel to 1..2n.
            let remap: BTreeMap<u32, u32> = counts
                .keys()
                .enumerate()
                .map(|(i, &e)| (e, i as u32 + 1))
                .collect();
            crossings
                .into_iter()
                .map(|c| Crossing(c.0.map(|e| remap[&e])))
                .collect()
        };
        let d = Diagram {
            id: id.into(),
            crossings,
        };
        d.check_connected()?;
        d.check_single_component()?;
        Ok(d)
    }

    /// Build a diagram without the single-component check, for evaluating
    /// multi-component worked examples (e.g. the Hopf link) in engines whose
    /// state sums are defined on links.  Label multiplicity is still checked.
    pub fn new_unchecked_for_links(id: impl Into<String>, crossings: Vec<Crossing>) -> Self {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for c in &crossings {
            for &e in &c.0 {
                *counts.entry(e).or_insert(0) += 1;
            }
        }
        assert!(counts.values().all(|&c| c == 2), "labels must appear twice");
        Diagram {
            id: id.into(),
            crossings,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn n(&self) -> usize {
        self.crossings.len()
    }

    /// Round-trippable `PD[X[a,b,c,d],...]` form (inverse of [`parse_pd`]).
    pub fn to_pd_string(&self) -> String {
        let body: Vec<String> = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.0;
                format!("X[{a},{b},{cc},{d}]")
            })
            .collect();
        format!("PD[{}]", body.join(","))
    }

    fn check_connected(&self) -> Result<(), Error> {
        let n = self.n();
        let mut dsu = Dsu::new(n);
        let mut seen: BTreeMap<u32, usize> = BTreeMap::new();
        for (ci, c) in self.crossings.iter().enumerate() {
            for &e in &c.0 {
                if let Some(&cj) = seen.get(&e) {
                    dsu.union(ci, cj);
                } else {
                    seen.insert(e, ci);
                }
            }
        }
        let root = dsu.find(0);
        if (0..n).all(|i| dsu.find(i) == root) {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    fn check_single_component(&self) -> Result<(), Error> {
        // Strands pass through a crossing pairing slots (0,2) and (1,3);
        // component count = classes of edges under those pairings.
        let m = 2 * self.n() as u32;
        let mut dsu = Dsu::new(m as usize);
        for c in &self.crossings {
            let [i, j, k, l] = c.0;
            dsu.union(i as usize - 1, k as usize - 1);
            dsu.union(j as usize - 1, l as usize - 1);
        }
        let distinct: std::collections::BTreeSet<usize> =
            (0..m as usize).map(|e| dsu.find(e)).collect();
        if distinct.len() == 1 {
            Ok(())
        } else {
            Err(Error::MultiComponent {
                components: distinct.len(),
            })
        }
    }

    /// The mirror diagram: each crossing's label cycle is rotated so that the
    /// over- and under-strands swap while slot 0 stays the incoming under
    /// edge.  Which rotation achieves that depends on the over-strand
    /// direction, so the diagram is oriented first.
    pub fn mirror(&self) -> Diagram {
        let oriented = self.orient().expect("valid diagram must orient");
        Diagram {
            id: format!("{}!", self.id),
            crossings: self
                .crossings
                .iter()
                .zip(oriented.signs())
                .map(|(c, &sign)| {
                    let [i, j, k, l] = c.0;
                    if sign > 0 {
                        // over strand ran j→l; it becomes the under strand
                        Crossing([j, k, l, i])
                    } else {
                        // over strand ran l→j
                        Crossing([l, i, j, k])
                    }
                })
                .collect(),
        }
    }

    /// Orient the diagram; see [`OrientedDiagram`].
    pub fn orient(&self) -> Result<OrientedDiagram, Error> {
        OrientedDiagram::new(self.clone())
    }
}

/// A diagram with a chosen orientation: crossing signs, strand directions and
/// the successor map of the edge cycle.
#[derive(Debug, Clone)]
pub struct OrientedDiagram {
    base: Diagram,
    /// Per crossing `(under_in, under_out, over_in, over_out)` edge labels.
    strands: Vec<(u32, u32, u32, u32)>,
    signs: Vec<i8>,
    successor: Vec<u32>,
    writhe: i64,
}

impl OrientedDiagram {
    fn new(base: Diagram) -> Result<Self, Error> {
        let n = base.n();
        let m = 2 * n as u32;
        // Over-strand direction: in X[i,j,k,l] the over strand is j→l when
        // l ≡ j+1 (mod 2n), else l→j.  For 1-crossing kinks both readings are
        // congruent; resolve ambiguities by searching the few flip patterns.
        let mut forced: Vec<Option<bool>> = Vec::with_capacity(n);
        for c in &base.crossings {
            let [_, j, _, l] = c.0;
            let jl = (l + m - j) % m == 1;
            let lj = (j + m - l) % m == 1;
            forced.push(match (jl, lj) {
                (true, false) => Some(true),
                (false, true) => Some(false),
                _ => None,
            });
        }
        let ambiguous: Vec<usize> = (0..n).filter(|&i| forced[i].is_none()).collect();
        let patterns = 1usize << ambiguous.len().min(20);
        for pat in 0..patterns {
            let mut od: Vec<bool> = forced.iter().map(|f| f.unwrap_or(false)).collect();
            for (bit, &ci) in ambiguous.iter().enumerate() {
                od[ci] = (pat >> bit) & 1 == 1;
            }
            if let Some(out) = Self::try_orientation(&base, &od) {
                return Ok(out);
            }
        }
        Err(Error::InconsistentOrientation)
    }

    fn try_orientation(base: &Diagram, over_jl: &[bool]) -> Option<OrientedDiagram> {
        let n = base.n();
        let m = 2 * n;
        let mut strands = Vec::with_capacity(n);
        let mut signs = Vec::with_capacity(n);
        let mut indeg = vec![0u8; m + 1];
        let mut succ = vec![0u32; m + 1];
        let mut outdeg = vec![0u8; m + 1];
        for (c, &od) in base.crossings.iter().zip(over_jl) {
            let [i, j, k, l] = c.0;
            let (oi, oo) = if od { (j, l) } else { (l, j) };
            strands.push((i, k, oi, oo));
            signs.push(if od { 1i8 } else { -1 });
            for (inp, out) in [(i, k), (oi, oo)] {
                indeg[inp as usize] += 1;
                outdeg[out as usize] += 1;
                succ[inp as usize] = out;
            }
        }
        if (1..=m).any(|e| indeg[e] != 1 || outdeg[e] != 1) {
            return None;
        }
        // The successor map must be one cycle over all 2n edges.
        let mut seen = 1usize;
        let mut e = succ[1] as usize;
        while e != 1 {
            seen += 1;
            if seen > m {
                return None;
            }
            e = succ[e] as usize;
        }
        if seen != m {
            return None;
        }
        let writhe = signs.iter().map(|&s| s as i64).sum();
        Some(OrientedDiagram {
            base: base.clone(),
            strands,
            signs,
            successor: succ,
            writhe,
        })
    }

    pub fn base(&self) -> &Diagram {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn id(&self) -> &str {
        self.base.id()
    }

    /// Per crossing `(under_in, under_out, over_in, over_out)`.
    pub fn strands(&self) -> &[(u32, u32, u32, u32)] {
        &self.strands
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn writhe(&self) -> i64 {
        self.writhe
    }

    /// Number of positive and negative crossings.
    pub fn signed_counts(&self) -> (usize, usize) {
        let pos = self.signs.iter().filter(|&&s| s > 0).count();
        (pos, self.n() - pos)
    }

    /// Edge following `e` along the orientation.
    pub fn successor(&self, e: u32) -> u32 {
        self.successor[e as usize]
    }
}

/// Parse one `PD[X[a,b,c,d],...]` expression (whitespace tolerant).
pub fn parse_pd(id: &str, text: &str) -> Result<Diagram, Error> {
    let mut p = PdParser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    p.expect_word("PD")?;
    p.expect(b'[')?;
    let mut crossings = Vec::new();
    if !p.peek(b']') {
        loop {
            p.expect_word("X")?;
            p.expect(b'[')?;
            let mut slots = [0u32; 4];
            for (idx, s) in slots.iter_mut().enumerate() {
                if idx > 0 {
                    p.expect(b',')?;
                }
                *s = p.number()?;
            }
            p.expect(b']')?;
            crossings.push(Crossing(slots));
            if !p.peek(b',') {
                break;
            }
            p.expect(b',')?;
        }
    }
    p.expect(b']')?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(Error::Syntax {
            pos: p.pos,
            msg: "trailing input".into(),
        });
    }
    Diagram::new(id, crossings)
}

struct PdParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PdParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), Error> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Syntax {
                pos: self.pos,
                msg: format!("expected '{}'", b as char),
            })
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), Error> {
        for &b in w.as_bytes() {
            self.expect(b)?;
        }
        Ok(())
    }

    fn peek(&mut self, b: u8) -> bool {
        self.skip_ws();
        self.pos < self.bytes.len() && self.bytes[self.pos] == b
    }

    fn number(&mut self) -> Result<u32, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Syntax {
                pos: self.pos,
                msg: "expected edge label".into(),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::Syntax {
                pos: start,
                msg: "edge label out of range".into(),
            })
    }
}

/// A census table: diagrams in source order with per-crossing-number counts.
#[derive(Debug, Default)]
pub struct KnotTable {
    pub knots: Vec<Diagram>,
    /// Per-line ingest failures `(line number, message)`, non-fatal.
    pub errors: Vec<(usize, String)>,
}

impl KnotTable {
    /// Count of knots per crossing number, ascending.
    pub fn counts_per_n(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for d in &self.knots {
            *out.entry(d.n()).or_insert(0) += 1;
        }
        out
    }

    /// Cumulative census sizes `n ↦ #knots with ≤ n crossings`.
    pub fn cumulative_counts(&self) -> BTreeMap<usize, usize> {
        let counts = self.counts_per_n();
        let mut out = BTreeMap::new();
        let mut acc = 0usize;
        for (&n, &c) in &counts {
            acc += c;
            out.insert(n, acc);
        }
        out
    }

    pub fn retain_max_crossings(&mut self, max_n: usize) {
        self.knots.retain(|d| d.n() <= max_n);
    }
}

/// Ingest a line-oriented knot list: `name;PD[...]` or bare `PD[...]` per
/// line; `#` comment lines and blank lines ignored.  Per-line errors are
/// collected, not fatal.
pub fn ingest_list<R: BufRead>(reader: R, max_crossings: Option<usize>) -> KnotTable {
    let mut table = KnotTable::default();
    let mut anon = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                table.errors.push((lineno + 1, format!("read error: {e}")));
                continue;
            }
        };
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (name, pd_text) = match t.split_once(';') {
            Some((n, p)) => (n.trim().to_string(), p.trim()),
            None => {
                anon += 1;
                (format!("knot{anon}"), t)
            }
        };
        match parse_pd(&name, pd_text) {
            Ok(d) => {
                if max_crossings.map_or(true, |m| d.n() <= m) {
                    table.knots.push(d);
                }
            }
            Err(e) => table.errors.push((lineno + 1, format!("{name}: {e}"))),
        }
    }
    table
}

/// Convert census CSV input (`name` and `pd_notation` columns, PD given either
/// as `PD[X[...],...]` or as a bracketed list `[[a,b,c,d],...]`) to the native
/// line format.  Returns the converted lines.
pub fn convert_csv<R: BufRead>(reader: R) -> Result<Vec<String>, Error> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or(Error::Syntax {
            pos: 0,
            msg: "empty CSV".into(),
        })?
        .map_err(|e| Error::Syntax {
            pos: 0,
            msg: e.to_string(),
        })?;
    let cols = split_csv(&header);
    let name_idx = cols
        .iter()
        .position(|c| c.trim() == "name")
        .ok_or(Error::Syntax {
            pos: 0,
            msg: "missing 'name' column".into(),
        })?;
    let pd_idx = cols
        .iter()
        .position(|c| c.trim() == "pd_notation")
        .ok_or(Error::Syntax {
            pos: 0,
            msg: "missing 'pd_notation' column".into(),
        })?;
    let mut out = Vec::new();
    for line in lines {
        let line = line.map_err(|e| Error::Syntax {
            pos: 0,
            msg: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_csv(&line);
        let name = fields.get(name_idx).cloned().unwrap_or_default();
        let pd = fields.get(pd_idx).cloned().unwrap_or_default();
        let pd = pd.trim().trim_matches('"').trim();
        let canonical = if pd.starts_with("PD") {
            pd.to_string()
        } else {
            // [[a,b,c,d],[...]] → PD[X[a,b,c,d],...]
            let inner = pd
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or(Error::Syntax {
                    pos: 0,
                    msg: format!("bad pd_notation: {pd}"),
                })?;
            let mut s = String::from("PD[");
            let mut first = true;
            for chunk in inner.split(']') {
                let chunk = chunk.trim_start_matches(',').trim();
                if chunk.is_empty() {
                    continue;
                }
                let nums = chunk.trim_start_matches('[').trim();
                if !first {
                    s.push(',');
                }
                first = false;
                s.push_str(&format!("X[{nums}]"));
            }
            s.push(']');
            s
        };
        out.push(format!("{};{}", name.trim(), canonical));
    }
    Ok(out)
}

fn split_csv(line: &str) -> Vec<String> {
    // Split on commas at bracket-depth 0, respecting double quotes.
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut quoted = false;
    for ch in line.chars() {
        match ch {
            '"' => quoted = !quoted,
            '[' if !quoted => {
                depth += 1;
                cur.push(ch);
            }
            ']' if !quoted => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if !quoted && depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}
