//! Design, resolution and provenance files.
//!
//! Text designs: a header line `v k n`, optional `# key value` metadata
//! lines (`t`, `lambda`, `simple`), then one sorted block per line.
//! Files ending in `.json` use `{"format":1,"v":..,"k":..,"blocks":[..]}`
//! with the same optional metadata keys.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{BlockProvenance, BlockType, CountingSummary, Filler};
use crate::design::{is_simple, lambda_profile, Design, LambdaCounter, LambdaProfile, Point, MAX_POINTS};
use crate::error::{Error, Result};
use crate::resolution::ResolvedDesign;
use crate::resolvability::PairSigma;

const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Text,
        }
    }
}

/// Optional parameters a file claims for its blocks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Declared {
    pub t: Option<usize>,
    pub lambda: Option<u64>,
    pub simple: Option<bool>,
}

impl Declared {
    /// What a verified simple `t`-design with `λ_t = lambda` declares.
    pub fn design(t: usize, lambda: u64) -> Self {
        Declared {
            t: Some(t),
            lambda: Some(lambda),
            simple: Some(true),
        }
    }
}

/// Blocks exactly as listed in a file.
#[derive(Clone, Debug)]
pub struct RawDesign {
    pub v: usize,
    pub k: usize,
    pub declared: Declared,
    /// Flat, each block sorted, in file order.
    pub points: Vec<Point>,
}

impl RawDesign {
    pub fn blocks(&self) -> std::slice::ChunksExact<'_, Point> {
        self.points.chunks_exact(self.k)
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn check_header(v: usize, k: usize, line: usize) -> Result<()> {
    if k < 2 || v <= k || v > MAX_POINTS {
        return Err(parse_err(line, format!("unsupported parameters v={v}, k={k}")));
    }
    Ok(())
}

/// Validates one block, sorts it and appends it.
fn push_block(v: usize, k: usize, raw: &[u64], line: usize, out: &mut Vec<Point>) -> Result<()> {
    let invalid = |reason: String| Error::InvalidBlock {
        block: raw.to_vec(),
        reason: format!("line {line}: {reason}"),
    };
    if raw.len() != k {
        return Err(invalid(format!("expected {k} points, found {}", raw.len())));
    }
    if let Some(&p) = raw.iter().find(|&&p| p as usize >= v) {
        return Err(invalid(format!("point {p} outside 0..{v}")));
    }
    let start = out.len();
    out.extend(raw.iter().map(|&p| p as Point));
    let b = &mut out[start..];
    b.sort_unstable();
    if b.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("repeated point".into()));
    }
    Ok(())
}

fn parse_meta(declared: &mut Declared, body: &str, line: usize) -> Result<()> {
    let mut it = body.split_whitespace();
    let (Some(key), Some(val)) = (it.next(), it.next()) else {
        return Ok(()); // free-form comment
    };
    let bad = || parse_err(line, format!("bad value for {key}: {val}"));
    match key {
        "t" => declared.t = Some(val.parse().map_err(|_| bad())?),
        "lambda" => declared.lambda = Some(val.parse().map_err(|_| bad())?),
        "simple" => declared.simple = Some(val.parse().map_err(|_| bad())?),
        _ => {}
    }
    Ok(())
}

/// Streams text blocks to `f` as `((v, k), line, raw points)`; returns the
/// header.
fn scan_text<R: BufRead>(
    reader: R,
    mut f: impl FnMut((usize, usize), usize, &[u64]) -> Result<()>,
) -> Result<(usize, usize, usize, Declared)> {
    let mut lines = reader.lines().enumerate();
    let mut header = None;
    let mut declared = Declared::default();
    let mut seen = 0usize;
    let mut raw = Vec::new();
    for (n, line) in &mut lines {
        let line_no = n + 1;
        let line = line?;
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(body) = s.strip_prefix('#') {
            if header.is_some() {
                parse_meta(&mut declared, body, line_no)?;
            }
            continue;
        }
        raw.clear();
        for tok in s.split_whitespace() {
            raw.push(
                tok.parse::<u64>()
                    .map_err(|_| parse_err(line_no, format!("not a number: {tok:?}")))?,
            );
        }
        match header {
            None => {
                let [v, k, n] = raw[..] else {
                    return Err(parse_err(line_no, "header must be \"v k n\""));
                };
                check_header(v as usize, k as usize, line_no)?;
                header = Some((v as usize, k as usize, n as usize));
            }
            Some((v, k, n)) => {
                if seen == n {
                    return Err(parse_err(line_no, format!("more than the declared {n} blocks")));
                }
                f((v, k), line_no, &raw)?;
                seen += 1;
            }
        }
    }
    let (v, k, n) = header.ok_or_else(|| parse_err(1, "missing header"))?;
    if seen != n {
        return Err(parse_err(0, format!("header declares {n} blocks, file has {seen}")));
    }
    if declared.lambda.is_some() && declared.t.is_none() {
        return Err(parse_err(0, "lambda declared without t"));
    }
    Ok((v, k, n, declared))
}

#[derive(Deserialize)]
struct JsonDesignIn {
    format: u32,
    v: usize,
    k: usize,
    #[serde(flatten)]
    declared: Declared,
    blocks: Vec<Vec<u64>>,
}

/// Reads blocks in file order. Each block is validated and sorted.
pub fn read_raw<R: Read>(reader: R, format: Format) -> Result<RawDesign> {
    match format {
        Format::Text => {
            let mut points = Vec::new();
            let (v, k, _, declared) =
                scan_text(BufReader::new(reader), |(v, k), line, raw| push_block(v, k, raw, line, &mut points))?;
            Ok(RawDesign { v, k, declared, points })
        }
        Format::Json => {
            let j: JsonDesignIn = serde_json::from_reader(BufReader::new(reader))?;
            if j.format != FORMAT_VERSION {
                return Err(parse_err(0, format!("unsupported format version {}", j.format)));
            }
            check_header(j.v, j.k, 0)?;
            let mut points = Vec::with_capacity(j.blocks.len() * j.k);
            for (n, b) in j.blocks.iter().enumerate() {
                push_block(j.v, j.k, b, n + 1, &mut points)?;
            }
            Ok(RawDesign {
                v: j.v,
                k: j.k,
                declared: j.declared,
                points,
            })
        }
    }
}

/// Checks declared parameters against counted ones.
pub fn verify_declared(d: &Design, declared: &Declared) -> Result<Option<LambdaProfile>> {
    if declared.simple == Some(true) {
        if let Err(b) = is_simple(d) {
            return Err(Error::Verification(format!("declared simple, but block {b:?} repeats")));
        }
    }
    let Some(t) = declared.t else {
        return Ok(None);
    };
    if t > d.k() {
        return Err(Error::Verification(format!("declared t = {t} exceeds k = {}", d.k())));
    }
    let profile = lambda_profile(d, t)?;
    check_profile(&profile, t, declared.lambda)?;
    Ok(Some(profile))
}

fn check_profile(profile: &LambdaProfile, t: usize, lambda: Option<u64>) -> Result<()> {
    let level = &profile.levels[t];
    if !level.is_design() {
        return Err(Error::Verification(format!(
            "not a {t}-design: {:?} lies in {} blocks, {:?} in {}",
            level.min_witness, level.min, level.max_witness, level.max
        )));
    }
    if let Some(l) = lambda {
        if level.min != l {
            return Err(Error::Verification(format!(
                "declared λ{t} = {l}, counted {} (e.g. {:?})",
                level.min, level.min_witness
            )));
        }
    }
    Ok(())
}

/// Reads a design in canonical block order and verifies what it declares.
pub fn read_design(path: &Path) -> Result<(Design, Declared)> {
    let raw = read_raw(File::open(path)?, Format::from_path(path))?;
    let d = Design::new(raw.v, raw.k, raw.blocks())?;
    verify_declared(&d, &raw.declared)?;
    Ok((d, raw.declared))
}

/// Loads an external filler: simple and a 3-design, by count.
pub fn load_filler(path: &Path) -> Result<Filler> {
    let (d, _) = read_design(path)?;
    Filler::from_design(d)
}

fn write_block_text<W: Write>(w: &mut W, b: &[Point]) -> std::io::Result<()> {
    for (n, p) in b.iter().enumerate() {
        if n > 0 {
            w.write_all(b" ")?;
        }
        write!(w, "{p}")?;
    }
    w.write_all(b"\n")
}

fn write_blocks<'a, W: Write>(
    w: &mut W,
    v: usize,
    k: usize,
    n: usize,
    blocks: impl Iterator<Item = &'a [Point]>,
    declared: &Declared,
    format: Format,
) -> Result<()> {
    match format {
        Format::Text => {
            writeln!(w, "{v} {k} {n}")?;
            if let Some(t) = declared.t {
                writeln!(w, "# t {t}")?;
            }
            if let Some(l) = declared.lambda {
                writeln!(w, "# lambda {l}")?;
            }
            if let Some(s) = declared.simple {
                writeln!(w, "# simple {s}")?;
            }
            for b in blocks {
                write_block_text(w, b)?;
            }
        }
        Format::Json => {
            write!(w, "{{\"format\":{FORMAT_VERSION},\"v\":{v},\"k\":{k}")?;
            if let Some(t) = declared.t {
                write!(w, ",\"t\":{t}")?;
            }
            if let Some(l) = declared.lambda {
                write!(w, ",\"lambda\":{l}")?;
            }
            if let Some(s) = declared.simple {
                write!(w, ",\"simple\":{s}")?;
            }
            w.write_all(b",\"blocks\":[")?;
            for (n, b) in blocks.enumerate() {
                w.write_all(if n == 0 { b"\n[" } else { b",\n[" })?;
                for (m, p) in b.iter().enumerate() {
                    if m > 0 {
                        w.write_all(b",")?;
                    }
                    write!(w, "{p}")?;
                }
                w.write_all(b"]")?;
            }
            w.write_all(b"\n]}\n")?;
        }
    }
    Ok(())
}

/// Serializes `d` in canonical order.
pub fn write_design<W: Write>(w: &mut W, d: &Design, declared: &Declared, format: Format) -> Result<()> {
    write_blocks(w, d.v(), d.k(), d.len(), d.blocks(), declared, format)
}

pub fn write_design_file(path: &Path, d: &Design, declared: &Declared) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_design(&mut w, d, declared, Format::from_path(path))?;
    w.flush()?;
    Ok(())
}

/// Result of [`verify_file`].
#[derive(Clone, Debug)]
pub struct FileReport {
    pub v: usize,
    pub k: usize,
    pub blocks: usize,
    pub declared: Declared,
    pub profile: LambdaProfile,
    /// A repeated block, if any.
    pub repeated: Option<Vec<Point>>,
}

impl FileReport {
    pub fn is_simple(&self) -> bool {
        self.repeated.is_none()
    }

    /// `"3-(v,k,λ)"` when the counted profile is a `t`-design.
    pub fn label(&self, t: usize) -> Option<String> {
        self.profile.lambda(t).map(|l| format!("{t}-({},{},{l})", self.v, self.k))
    }

    /// Declared parameters hold and the file is a simple `t`-design.
    pub fn check(&self, t: usize) -> Result<()> {
        if let Some(b) = &self.repeated {
            return Err(Error::Verification(format!("block {b:?} repeats")));
        }
        check_profile(&self.profile, t, None)?;
        if let Some(dt) = self.declared.t {
            if dt <= self.profile.t {
                check_profile(&self.profile, dt, self.declared.lambda)?;
            }
        }
        Ok(())
    }
}

const STREAM_BATCH: usize = 1 << 15;

/// Counts the λ-profile up to `t` in one pass over the file, holding only
/// the subset counters and one batch of blocks. Simplicity is read off
/// adjacent blocks when the file is in canonical order, and checked after
/// sorting otherwise.
pub fn verify_file(path: &Path, t: usize) -> Result<FileReport> {
    if Format::from_path(path) == Format::Json {
        let raw = read_raw(File::open(path)?, Format::Json)?;
        let d = Design::new(raw.v, raw.k, raw.blocks())?;
        let profile = lambda_profile(&d, t.min(raw.k))?;
        return Ok(FileReport {
            v: raw.v,
            k: raw.k,
            blocks: d.len(),
            declared: raw.declared,
            profile,
            repeated: is_simple(&d).err(),
        });
    }
    let file = BufReader::new(File::open(path)?);
    let mut state: Option<StreamState> = None;
    let (v, k, n, declared) = scan_text(file, |(v, k), line, raw| {
        if state.is_none() {
            state = Some(StreamState::new(v, k, t.min(k))?);
        }
        state.as_mut().expect("just set").push(raw, line)
    })?;
    let mut st = match state {
        Some(st) => st,
        None => StreamState::new(v, k, t.min(k))?,
    };
    st.flush();
    let repeated = if st.sorted {
        st.repeated
    } else {
        let d = read_design_unchecked(path)?;
        is_simple(&d).err()
    };
    Ok(FileReport {
        v,
        k,
        blocks: n,
        declared,
        profile: st.counter.finish(),
        repeated,
    })
}

fn read_design_unchecked(path: &Path) -> Result<Design> {
    let raw = read_raw(File::open(path)?, Format::from_path(path))?;
    Design::new(raw.v, raw.k, raw.blocks())
}

struct StreamState {
    v: usize,
    k: usize,
    counter: LambdaCounter,
    batch: Vec<Point>,
    last: Vec<Point>,
    sorted: bool,
    repeated: Option<Vec<Point>>,
}

impl StreamState {
    fn new(v: usize, k: usize, t: usize) -> Result<Self> {
        Ok(StreamState {
            v,
            k,
            counter: LambdaCounter::new(v, k, t)?,
            batch: Vec::with_capacity(STREAM_BATCH * k),
            last: Vec::new(),
            sorted: true,
            repeated: None,
        })
    }

    fn push(&mut self, raw: &[u64], line: usize) -> Result<()> {
        let start = self.batch.len();
        push_block(self.v, self.k, raw, line, &mut self.batch)?;
        let b = &self.batch[start..];
        if !self.last.is_empty() {
            match self.last.as_slice().cmp(b) {
                std::cmp::Ordering::Greater => self.sorted = false,
                std::cmp::Ordering::Equal if self.repeated.is_none() => self.repeated = Some(b.to_vec()),
                _ => {}
            }
        }
        self.last.clear();
        self.last.extend_from_slice(b);
        if self.batch.len() >= STREAM_BATCH * self.k {
            self.flush();
        }
        Ok(())
    }

    fn flush(&mut self) {
        let k = self.k;
        let proto = self.counter.empty_like();
        let part = self
            .batch
            .par_chunks(4096 * k)
            .fold(
                || proto.clone(),
                |mut acc, chunk| {
                    chunk.chunks_exact(k).for_each(|b| acc.add(b));
                    acc
                },
            )
            .reduce(
                || proto.clone(),
                |mut a, b| {
                    a.merge(&b);
                    a
                },
            );
        self.counter.merge(&part);
        self.batch.clear();
    }
}

/// Writes the blocks of `r` class by class (base classes only) and a
/// classes file listing `w σ` and the start offset of each class.
pub fn write_resolution(blocks_path: &Path, classes_path: &Path, r: &ResolvedDesign, sigma: u64) -> Result<()> {
    let w = r.w();
    let mut starts = Vec::with_capacity(w);
    let mut order = Vec::with_capacity(r.block_count());
    for i in 0..w {
        starts.push(order.len());
        order.extend_from_slice(r.class(i));
    }
    let d = r.base_design();
    let mut out = BufWriter::new(File::create(blocks_path)?);
    let blocks = (0..w).flat_map(|i| r.class_blocks(i));
    write_blocks(
        &mut out,
        r.v(),
        r.k(),
        order.len(),
        blocks,
        &Declared::default(),
        Format::from_path(blocks_path),
    )?;
    out.flush()?;
    debug_assert!(order.iter().all(|&b| (b as usize) < d.len()));

    let mut c = BufWriter::new(File::create(classes_path)?);
    match Format::from_path(classes_path) {
        Format::Text => {
            writeln!(c, "{w} {sigma}")?;
            for s in &starts {
                writeln!(c, "{s}")?;
            }
        }
        Format::Json => {
            serde_json::to_writer(&mut c, &ClassesJson {
                format: FORMAT_VERSION,
                sigma,
                starts: starts.clone(),
            })?;
            writeln!(c)?;
        }
    }
    c.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ClassesJson {
    format: u32,
    sigma: u64,
    starts: Vec<usize>,
}

/// Class boundaries and declared `σ` from a classes file.
pub fn read_classes(path: &Path) -> Result<(u64, Vec<usize>)> {
    match Format::from_path(path) {
        Format::Json => {
            let c: ClassesJson = serde_json::from_reader(BufReader::new(File::open(path)?))?;
            Ok((c.sigma, c.starts))
        }
        Format::Text => {
            let mut header: Option<(usize, u64)> = None;
            let mut starts = Vec::new();
            for (n, line) in BufReader::new(File::open(path)?).lines().enumerate() {
                let line = line?;
                let s = line.trim();
                if s.is_empty() || s.starts_with('#') {
                    continue;
                }
                let bad = || parse_err(n + 1, format!("malformed line {s:?}"));
                if header.is_none() {
                    let mut it = s.split_whitespace();
                    let w = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
                    let sigma = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
                    header = Some((w, sigma));
                } else {
                    starts.push(s.parse().map_err(|_| bad())?);
                }
            }
            let (w, sigma) = header.ok_or_else(|| parse_err(1, "missing \"w sigma\" header"))?;
            if starts.len() != w {
                return Err(parse_err(0, format!("header declares {w} classes, found {}", starts.len())));
            }
            Ok((sigma, starts))
        }
    }
}

/// Reads a resolution written by [`write_resolution`]: blocks in class
/// order plus class start offsets. Returns the resolution and declared σ.
pub fn read_resolution(blocks_path: &Path, classes_path: &Path) -> Result<(ResolvedDesign, u64)> {
    let raw = read_raw(File::open(blocks_path)?, Format::from_path(blocks_path))?;
    let (sigma, starts) = read_classes(classes_path)?;
    let n = raw.len();
    if starts.first() != Some(&0) || starts.windows(2).any(|w| w[0] >= w[1]) || starts.last().is_some_and(|&s| s >= n) {
        return Err(parse_err(0, format!("class starts must increase from 0 and stay below {n}")));
    }
    let k = raw.k;
    let mut bounds = starts.clone();
    bounds.push(n);
    let classes = bounds
        .windows(2)
        .map(|w| raw.points[w[0] * k..w[1] * k].chunks_exact(k).collect::<Vec<_>>());
    let r = ResolvedDesign::from_class_blocks(raw.v, k, classes)?;
    Ok((r, sigma))
}

/// Sidecar describing how each block of a constructed design arose.
/// `blocks[n]` belongs to block `n` in canonical order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProvenanceFile {
    pub format: u32,
    /// Design file the records refer to, as given when written.
    pub design: Option<PathBuf>,
    pub summary: CountingSummary,
    /// Present when `Λ = 0`.
    #[serde(default)]
    pub sigmas: Option<Vec<PairSigma>>,
    pub blocks: Vec<(u32, u32, u32, BlockType)>,
}

impl ProvenanceFile {
    pub fn new(design: Option<PathBuf>, summary: CountingSummary, provenance: &[BlockProvenance]) -> Self {
        let sigmas = crate::resolvability::pair_sigmas(&summary).ok();
        ProvenanceFile {
            format: FORMAT_VERSION,
            design,
            summary,
            sigmas,
            blocks: provenance.iter().map(|p| (p.pair, p.i, p.j, p.btype)).collect(),
        }
    }

    pub fn provenance(&self) -> Vec<BlockProvenance> {
        self.blocks
            .iter()
            .map(|&(pair, i, j, btype)| BlockProvenance { pair, i, j, btype })
            .collect()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let p: ProvenanceFile = serde_json::from_reader(BufReader::new(File::open(path)?))?;
        if p.format != FORMAT_VERSION {
            return Err(parse_err(0, format!("unsupported format version {}", p.format)));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::complete_design;

    fn text(d: &Design, declared: &Declared) -> String {
        let mut buf = Vec::new();
        write_design(&mut buf, d, declared, Format::Text).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn complete_design_text_body() {
        let s = text(&complete_design(5, 2).unwrap(), &Declared::default());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "5 2 10");
        assert_eq!(lines.len(), 11);
        assert_eq!(lines[1], "0 1");
        assert_eq!(lines[10], "3 4");
        assert!(!s.contains('\r'));
    }

    #[test]
    fn round_trip_both_formats() {
        let d = complete_design(7, 3).unwrap();
        let decl = Declared::design(3, 1);
        for format in [Format::Text, Format::Json] {
            let mut buf = Vec::new();
            write_design(&mut buf, &d, &decl, format).unwrap();
            let raw = read_raw(&buf[..], format).unwrap();
            assert_eq!(raw.declared, decl);
            let back = Design::new(raw.v, raw.k, raw.blocks()).unwrap();
            assert_eq!(back, d);
            verify_declared(&back, &raw.declared).unwrap();
            let mut again = Vec::new();
            write_design(&mut again, &back, &decl, format).unwrap();
            assert_eq!(buf, again);
        }
    }

    #[test]
    fn declared_lambda_mismatch() {
        let d = complete_design(7, 3).unwrap();
        let e = verify_declared(&d, &Declared::design(3, 5)).unwrap_err().to_string();
        assert!(e.contains("declared λ3 = 5, counted 1"), "{e}");
        let short = Design::new(7, 3, d.blocks().skip(1)).unwrap();
        let e = verify_declared(&short, &Declared::design(3, 1)).unwrap_err().to_string();
        assert!(e.contains("not a 3-design"), "{e}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("5 2 2\n0 1\n0 x\n", "line 3"),
            ("5 2 2\n0 1\n", "declares 2 blocks"),
            ("5 2 1\n0 7\n", "point 7 outside"),
            ("5 2 1\n1 1\n", "repeated point"),
            ("5 2 1\n0 1 2\n", "expected 2 points"),
            ("5 2\n", "header"),
            ("5 2 1\n# lambda 3\n0 1\n", "lambda declared without t"),
        ];
        for (input, needle) in cases {
            let e = read_raw(input.as_bytes(), Format::Text).unwrap_err().to_string();
            assert!(e.contains(needle), "{input:?}: {e}");
        }
    }

    #[test]
    fn json_rejects_bad_blocks() {
        let j = r#"{"format":1,"v":5,"k":2,"blocks":[[0,1],[2,9]]}"#;
        let e = read_raw(j.as_bytes(), Format::Json).unwrap_err();
        assert_eq!(e.category(), "invalid-block");
        let j = r#"{"format":2,"v":5,"k":2,"blocks":[]}"#;
        assert!(read_raw(j.as_bytes(), Format::Json).is_err());
    }

    #[test]
    fn streaming_verification() {
        let dir = tempfile::tempdir().unwrap();
        let d = complete_design(9, 4).unwrap();
        let p = dir.path().join("d.txt");
        write_design_file(&p, &d, &Declared::design(3, 6)).unwrap();
        let r = verify_file(&p, 3).unwrap();
        assert_eq!(r.label(3).as_deref(), Some("3-(9,4,6)"));
        assert!(r.is_simple());
        r.check(3).unwrap();

        // unsorted file with a repeated block
        std::fs::write(&p, "6 3 3\n0 1 2\n3 4 5\n0 2 1\n").unwrap();
        let r = verify_file(&p, 3).unwrap();
        assert_eq!(r.repeated, Some(vec![0, 1, 2]));
        assert!(r.check(3).is_err());
    }

    #[test]
    fn resolution_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let r = crate::resolution::round_robin_one_factorization(6).unwrap();
        for ext in ["txt", "json"] {
            let bp = dir.path().join(format!("r.{ext}"));
            let cp = dir.path().join(format!("r.classes.{ext}"));
            write_resolution(&bp, &cp, &r, 1).unwrap();
            let (back, sigma) = read_resolution(&bp, &cp).unwrap();
            assert_eq!(sigma, 1);
            assert_eq!(back.w(), 5);
            assert_eq!(crate::resolution::verify_resolution(&back).unwrap(), 1);
            assert_eq!(back.base_design(), r.base_design());
        }
    }
}
