//! File-format layer: feature matrices (CSV and VDSF binary), concept sets,
//! concept probabilities, tag tables, snippet indices, relevance scores, and
//! raw PPM frames with color-histogram features.

pub mod ppm;

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Dense n x d matrix of non-negative finite feature values, row per item.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    n: usize,
    d: usize,
    data: Vec<f64>,
    ids: Option<Vec<String>>,
}

impl FeatureMatrix {
    pub fn from_parts(n: usize, d: usize, data: Vec<f64>, ids: Option<Vec<String>>) -> Result<Self> {
        if n * d == 0 {
            return Err(Error::InvalidParam("feature matrix must be non-empty".into()));
        }
        if data.len() != n * d {
            return Err(Error::InvalidParam(format!(
                "feature payload {} != {n} x {d}",
                data.len()
            )));
        }
        if let Some(ids) = &ids {
            if ids.len() != n {
                return Err(Error::InvalidParam(format!("{} ids for {n} rows", ids.len())));
            }
        }
        for (i, &v) in data.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidFeature(format!(
                    "value {v} at row {}, column {}",
                    i / d,
                    i % d
                )));
            }
        }
        Ok(FeatureMatrix { n, d, data, ids })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.d + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn ids(&self) -> Option<&[String]> {
        self.ids.as_deref()
    }

    /// New matrix holding the given subset of rows, ids carried over.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyGroundSet("row subset is empty".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * self.d);
        for &r in rows {
            if r >= self.n {
                return Err(Error::InvalidParam(format!("row {r} out of range")));
            }
            data.extend_from_slice(self.row(r));
        }
        let ids = self
            .ids
            .as_ref()
            .map(|ids| rows.iter().map(|&r| ids[r].clone()).collect());
        FeatureMatrix::from_parts(rows.len(), self.d, data, ids)
    }
}

fn parse_cell(cell: &str) -> Option<f64> {
    let t = cell.trim();
    if t.is_empty() {
        return None;
    }
    t.parse::<f64>().ok().filter(|v| !v.is_nan())
}

/// Loads a comma-separated feature matrix. An initial header row and a
/// leading id column are both optional and detected by non-numeric content.
pub fn load_features_csv(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_features_csv(&text)
}

pub fn parse_features_csv(text: &str) -> Result<FeatureMatrix> {
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').collect())
        .collect();
    if rows.is_empty() {
        return Err(Error::ParseError("no rows".into()));
    }
    // Header if the last cell of the first row is non-numeric; a leading id
    // column only ever makes the *first* cell non-numeric.
    let header = parse_cell(rows[0].last().unwrap()).is_none();
    let data_rows = &rows[if header { 1 } else { 0 }..];
    if data_rows.is_empty() {
        return Err(Error::ParseError("header without data rows".into()));
    }
    let id_column = parse_cell(data_rows[0][0]).is_none();
    let d = data_rows[0].len() - usize::from(id_column);
    if d == 0 {
        return Err(Error::ParseError("rows carry ids but no feature columns".into()));
    }

    let n = data_rows.len();
    let mut data = Vec::with_capacity(n * d);
    let mut ids = if id_column { Some(Vec::with_capacity(n)) } else { None };
    for (r, row) in data_rows.iter().enumerate() {
        if row.len() != d + usize::from(id_column) {
            return Err(Error::ParseError(format!(
                "row {r} has {} cells, expected {}",
                row.len(),
                d + usize::from(id_column)
            )));
        }
        if let Some(ids) = ids.as_mut() {
            ids.push(row[0].trim().to_string());
        }
        for cell in &row[usize::from(id_column)..] {
            let v = parse_cell(cell)
                .ok_or_else(|| Error::ParseError(format!("row {r}: bad number `{cell}`")))?;
            if v < 0.0 {
                return Err(Error::InvalidFeature(format!("row {r}: negative value {v}")));
            }
            data.push(v);
        }
    }
    FeatureMatrix::from_parts(n, d, data, ids)
}

const VDSF_MAGIC: &[u8; 4] = b"VDSF";
const VDSF_VERSION: u32 = 1;

/// Writes the VDSF binary layout: magic "VDSF", version u32, n u32, d u32,
/// then n*d little-endian float32 values in row-major order.
pub fn save_features_binary(fm: &FeatureMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::with_capacity(16 + fm.data.len() * 4);
    buf.extend_from_slice(VDSF_MAGIC);
    buf.extend_from_slice(&VDSF_VERSION.to_le_bytes());
    buf.extend_from_slice(&(fm.n as u32).to_le_bytes());
    buf.extend_from_slice(&(fm.d as u32).to_le_bytes());
    for &v in &fm.data {
        buf.extend_from_slice(&(v as f32).to_le_bytes());
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(&buf)?;
    Ok(())
}

pub fn load_features_binary(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    parse_features_binary(&bytes)
}

pub fn parse_features_binary(bytes: &[u8]) -> Result<FeatureMatrix> {
    if bytes.len() < 16 {
        return Err(Error::FormatError("truncated VDSF header".into()));
    }
    if &bytes[0..4] != VDSF_MAGIC {
        return Err(Error::FormatError("bad magic, expected VDSF".into()));
    }
    let word = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let version = word(4);
    if version != VDSF_VERSION {
        return Err(Error::FormatError(format!("unsupported VDSF version {version}")));
    }
    let n = word(8) as usize;
    let d = word(12) as usize;
    let expected = n
        .checked_mul(d)
        .and_then(|nd| nd.checked_mul(4))
        .ok_or_else(|| Error::FormatError("n * d overflows".into()))?;
    if n * d == 0 {
        return Err(Error::FormatError("empty payload".into()));
    }
    if bytes.len() - 16 != expected {
        return Err(Error::FormatError(format!(
            "payload holds {} bytes, header implies {expected}",
            bytes.len() - 16
        )));
    }
    let mut data = Vec::with_capacity(n * d);
    for chunk in bytes[16..].chunks_exact(4) {
        let v = f32::from_le_bytes(chunk.try_into().unwrap()) as f64;
        data.push(v);
    }
    // from_parts re-validates finiteness and sign
    FeatureMatrix::from_parts(n, d, data, None)
}

/// Per-item concept sets over a shared weighted universe.
#[derive(Debug, Clone)]
pub struct ConceptData {
    /// Concept names, sorted; index = concept id.
    pub concepts: Vec<String>,
    /// Weight per concept id, default 1.0.
    pub weights: Vec<f64>,
    /// Concept ids per item, sorted and deduplicated.
    pub items: Vec<Vec<u32>>,
}

/// Loads JSON-lines concept sets: one `{"item": index-or-id, "concepts":
/// [..]}` record per item plus an optional `{"weights": {..}}` record.
/// `ids`, when given, resolves string item references.
pub fn load_concepts(path: impl AsRef<Path>, n: usize, ids: Option<&[String]>) -> Result<ConceptData> {
    let text = std::fs::read_to_string(path)?;
    parse_concepts(&text, n, ids)
}

pub fn parse_concepts(text: &str, n: usize, ids: Option<&[String]>) -> Result<ConceptData> {
    let mut raw_items: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut raw_weights: BTreeMap<String, f64> = BTreeMap::new();
    let mut universe: std::collections::BTreeSet<String> = Default::default();

    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| Error::ParseError(format!("line {}: {e}", lineno + 1)))?;
        if let Some(weights) = v.get("weights") {
            let map = weights
                .as_object()
                .ok_or_else(|| Error::ParseError(format!("line {}: weights must be an object", lineno + 1)))?;
            for (concept, w) in map {
                let w = w
                    .as_f64()
                    .ok_or_else(|| Error::InvalidWeight(format!("`{concept}` is not a number")))?;
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidWeight(format!("`{concept}` = {w}")));
                }
                universe.insert(concept.clone());
                raw_weights.insert(concept.clone(), w);
            }
            continue;
        }
        let item = v
            .get("item")
            .ok_or_else(|| Error::ParseError(format!("line {}: missing `item`", lineno + 1)))?;
        let index = resolve_item(item, n, ids)?;
        let concepts = v
            .get("concepts")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::ParseError(format!("line {}: missing `concepts` array", lineno + 1)))?;
        for c in concepts {
            let name = c
                .as_str()
                .ok_or_else(|| Error::ParseError(format!("line {}: concept must be a string", lineno + 1)))?;
            universe.insert(name.to_string());
            raw_items[index].push(name.to_string());
        }
    }

    let concepts: Vec<String> = universe.into_iter().collect();
    let index_of: BTreeMap<&str, u32> = concepts
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i as u32))
        .collect();
    let weights = concepts
        .iter()
        .map(|c| raw_weights.get(c).copied().unwrap_or(1.0))
        .collect();
    let items = raw_items
        .into_iter()
        .map(|cs| {
            let mut v: Vec<u32> = cs.iter().map(|c| index_of[c.as_str()]).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    Ok(ConceptData { concepts, weights, items })
}

fn resolve_item(item: &serde_json::Value, n: usize, ids: Option<&[String]>) -> Result<usize> {
    match item {
        serde_json::Value::Number(num) => {
            let idx = num
                .as_u64()
                .ok_or_else(|| Error::UnknownItem(num.to_string()))? as usize;
            if idx >= n {
                return Err(Error::UnknownItem(format!("{idx} (n = {n})")));
            }
            Ok(idx)
        }
        serde_json::Value::String(s) => {
            let ids = ids.ok_or_else(|| Error::UnknownItem(s.clone()))?;
            ids.iter()
                .position(|id| id == s)
                .ok_or_else(|| Error::UnknownItem(s.clone()))
        }
        other => Err(Error::ParseError(format!("bad item reference {other}"))),
    }
}

/// Item-by-concept probability table with named concept columns.
#[derive(Debug, Clone)]
pub struct ProbabilityTable {
    pub concepts: Vec<String>,
    pub n: usize,
    /// Row-major n x |concepts| values in [0, 1].
    pub probs: Vec<f64>,
}

/// Loads a probability CSV: header row of concept names, then one row of
/// values in [0, 1] per item.
pub fn load_probabilities(path: impl AsRef<Path>) -> Result<ProbabilityTable> {
    let text = std::fs::read_to_string(path)?;
    parse_probabilities(&text)
}

pub fn parse_probabilities(text: &str) -> Result<ProbabilityTable> {
    let mut lines = text
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::ParseError("empty file".into()))?;
    let concepts: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    let m = concepts.len();
    let mut probs = Vec::new();
    let mut n = 0;
    for (r, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != m {
            return Err(Error::ParseError(format!("row {r} has {} cells, expected {m}", cells.len())));
        }
        for cell in cells {
            let v = parse_cell(cell)
                .ok_or_else(|| Error::ParseError(format!("row {r}: bad number `{cell}`")))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidProbability(format!("row {r}: {v}")));
            }
            probs.push(v);
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::ParseError("no probability rows".into()));
    }
    Ok(ProbabilityTable { concepts, n, probs })
}

/// Loads one finite relevance score per line.
pub fn load_scores(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (r, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v = parse_cell(line)
            .ok_or_else(|| Error::ParseError(format!("line {}: bad score `{line}`", r + 1)))?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::ParseError("no scores".into()));
    }
    Ok(out)
}

/// Loads one integer class label per line.
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (r, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: usize = line
            .trim()
            .parse()
            .map_err(|_| Error::ParseError(format!("line {}: bad label `{line}`", r + 1)))?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::ParseError("no labels".into()));
    }
    Ok(out)
}

/// One selectable video snippet: an ordered group of frames with a cost in
/// seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Snippet {
    pub id: String,
    pub frames: Vec<usize>,
    pub cost: f64,
}

/// The snippet ground set over a frame universe of known size.
#[derive(Debug, Clone, PartialEq)]
pub struct SnippetIndex {
    pub snippets: Vec<Snippet>,
    pub frame_count: usize,
}

/// Loads JSON-lines snippets: `{"id": s, "frames": [ints], "cost": secs}`.
pub fn load_snippets(path: impl AsRef<Path>, frame_count: usize) -> Result<SnippetIndex> {
    let text = std::fs::read_to_string(path)?;
    parse_snippets(&text, frame_count)
}

pub fn parse_snippets(text: &str, frame_count: usize) -> Result<SnippetIndex> {
    #[derive(serde::Deserialize)]
    struct Rec {
        id: String,
        frames: Vec<usize>,
        cost: f64,
    }
    let mut snippets = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: Rec = serde_json::from_str(line)
            .map_err(|e| Error::ParseError(format!("line {}: {e}", lineno + 1)))?;
        if rec.frames.is_empty() {
            return Err(Error::InvalidSnippet(format!("`{}` has no frames", rec.id)));
        }
        if let Some(&bad) = rec.frames.iter().find(|&&f| f >= frame_count) {
            return Err(Error::InvalidSnippet(format!(
                "`{}` references frame {bad} (frame count {frame_count})",
                rec.id
            )));
        }
        if !rec.cost.is_finite() || rec.cost <= 0.0 {
            return Err(Error::InvalidCost(format!("snippet `{}` cost {}", rec.id, rec.cost)));
        }
        snippets.push(Snippet { id: rec.id, frames: rec.frames, cost: rec.cost });
    }
    if snippets.is_empty() {
        return Err(Error::InvalidSnippet("no snippets".into()));
    }
    Ok(SnippetIndex { snippets, frame_count })
}

/// Per-item tag assignments with confidences, lowercase-normalized.
#[derive(Debug, Clone, Default)]
pub struct TagTable {
    pub per_item: Vec<Vec<(String, f64)>>,
}

/// Loads JSON-lines tags: `{"item": id, "tags": [{"tag": s, "conf": x}]}`.
pub fn load_tags(path: impl AsRef<Path>, n: usize, ids: Option<&[String]>) -> Result<TagTable> {
    let text = std::fs::read_to_string(path)?;
    parse_tags(&text, n, ids)
}

pub fn parse_tags(text: &str, n: usize, ids: Option<&[String]>) -> Result<TagTable> {
    let mut per_item: Vec<Vec<(String, f64)>> = vec![Vec::new(); n];
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| Error::ParseError(format!("line {}: {e}", lineno + 1)))?;
        let item = v
            .get("item")
            .ok_or_else(|| Error::ParseError(format!("line {}: missing `item`", lineno + 1)))?;
        let index = resolve_item(item, n, ids)?;
        let tags = v
            .get("tags")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::ParseError(format!("line {}: missing `tags` array", lineno + 1)))?;
        for t in tags {
            let tag = t
                .get("tag")
                .and_then(|s| s.as_str())
                .ok_or_else(|| Error::ParseError(format!("line {}: missing `tag`", lineno + 1)))?;
            let conf = t
                .get("conf")
                .and_then(|c| c.as_f64())
                .ok_or_else(|| Error::ParseError(format!("line {}: missing `conf`", lineno + 1)))?;
            if !(0.0..=1.0).contains(&conf) {
                return Err(Error::InvalidProbability(format!("tag confidence {conf}")));
            }
            per_item[index].push((tag.to_lowercase(), conf));
        }
    }
    Ok(TagTable { per_item })
}

/// Mean-pools frame features into one row per snippet. Returns the snippet
/// feature matrix and the per-snippet costs for the derived ground set.
pub fn aggregate_snippets(frame_features: &FeatureMatrix, idx: &SnippetIndex) -> Result<(FeatureMatrix, Vec<f64>)> {
    if idx.frame_count != frame_features.n() {
        return Err(Error::DimensionMismatch(format!(
            "snippet index covers {} frames, features have {}",
            idx.frame_count,
            frame_features.n()
        )));
    }
    let d = frame_features.d();
    let mut data = Vec::with_capacity(idx.snippets.len() * d);
    let mut costs = Vec::with_capacity(idx.snippets.len());
    let mut ids = Vec::with_capacity(idx.snippets.len());
    for s in &idx.snippets {
        if s.frames.is_empty() {
            return Err(Error::InvalidSnippet(format!("`{}` has no frames", s.id)));
        }
        let mut acc = vec![0.0; d];
        for &f in &s.frames {
            for (a, &v) in acc.iter_mut().zip(frame_features.row(f)) {
                *a += v;
            }
        }
        let inv = 1.0 / s.frames.len() as f64;
        data.extend(acc.into_iter().map(|v| v * inv));
        costs.push(s.cost);
        ids.push(s.id.clone());
    }
    let fm = FeatureMatrix::from_parts(idx.snippets.len(), d, data, Some(ids))?;
    Ok((fm, costs))
}

/// Result of query filtering: surviving snippets, their original positions,
/// and a warning flag when nothing matched.
#[derive(Debug, Clone)]
pub struct FilteredSnippets {
    pub index: SnippetIndex,
    /// Original snippet position for each retained snippet.
    pub provenance: Vec<usize>,
    pub warning: bool,
}

/// Keeps snippets having at least one member frame carrying `query` at
/// confidence >= `min_conf`. An empty result is flagged, not an error.
pub fn filter_by_query(idx: &SnippetIndex, tags: &TagTable, query: &str, min_conf: f64) -> Result<FilteredSnippets> {
    if query.trim().is_empty() {
        return Err(Error::InvalidParam("query must be non-empty".into()));
    }
    let query = query.to_lowercase();
    let frame_matches = |f: usize| -> bool {
        tags.per_item
            .get(f)
            .map(|ts| ts.iter().any(|(t, c)| *t == query && *c >= min_conf))
            .unwrap_or(false)
    };
    let mut kept = Vec::new();
    let mut provenance = Vec::new();
    for (pos, s) in idx.snippets.iter().enumerate() {
        if s.frames.iter().any(|&f| frame_matches(f)) {
            kept.push(s.clone());
            provenance.push(pos);
        }
    }
    let warning = kept.is_empty();
    Ok(FilteredSnippets {
        index: SnippetIndex { snippets: kept, frame_count: idx.frame_count },
        provenance,
        warning,
    })
}

/// Loads `.ppm` frames from a directory in lexicographic order and computes
/// hue/saturation histogram features.
pub fn load_frames_dir(dir: impl AsRef<Path>, bins_h: usize, bins_s: usize) -> Result<FeatureMatrix> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().map(|e| e == "ppm").unwrap_or(false))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::EmptyGroundSet("no .ppm frames in directory".into()));
    }
    let mut data = Vec::new();
    let mut ids = Vec::new();
    for p in &paths {
        let bytes = std::fs::read(p)?;
        let image = ppm::parse_ppm(&bytes)?;
        data.extend(ppm::color_histogram(&image, bins_h, bins_s)?);
        ids.push(
            p.file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        );
    }
    FeatureMatrix::from_parts(paths.len(), bins_h * bins_s, data, Some(ids))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_plain_matrix() {
        let fm = parse_features_csv("1,0\n0,1\n").unwrap();
        assert_eq!((fm.n(), fm.d()), (2, 2));
        assert_eq!(fm.values(), &[1.0, 0.0, 0.0, 1.0]);
        assert!(fm.ids().is_none());
    }

    #[test]
    fn csv_header_and_id_column() {
        let fm = parse_features_csv("id,f1\na,1\n").unwrap();
        assert_eq!((fm.n(), fm.d()), (1, 1));
        assert_eq!(fm.ids().unwrap(), &["a".to_string()]);
    }

    #[test]
    fn csv_ragged_rows_rejected() {
        assert!(matches!(parse_features_csv("1,2\n3\n"), Err(Error::ParseError(_))));
    }

    #[test]
    fn csv_negative_rejected() {
        assert!(matches!(parse_features_csv("1,-2\n"), Err(Error::InvalidFeature(_))));
    }

    #[test]
    fn vdsf_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.vdsf");
        let vals: Vec<f64> = vec![0.25, 1.5, 3.0, 0.0, 2.0, 7.25];
        let fm = FeatureMatrix::from_parts(2, 3, vals.clone(), None).unwrap();
        save_features_binary(&fm, &path).unwrap();
        let back = load_features_binary(&path).unwrap();
        // values chosen f32-exact, so the round trip is the identity
        assert_eq!(back.values(), &vals[..]);
    }

    #[test]
    fn vdsf_bad_magic() {
        let mut bytes = b"XXXX".to_vec();
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(&1.0f32.to_le_bytes());
        assert!(matches!(parse_features_binary(&bytes), Err(Error::FormatError(_))));
    }

    #[test]
    fn vdsf_truncated_payload() {
        let mut bytes = b"VDSF".to_vec();
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(&2u32.to_le_bytes());
        bytes.extend_from_slice(&2u32.to_le_bytes());
        for _ in 0..3 {
            bytes.extend_from_slice(&1.0f32.to_le_bytes());
        }
        assert!(matches!(parse_features_binary(&bytes), Err(Error::FormatError(_))));
    }

    #[test]
    fn csv_and_binary_loaders_agree_at_f32_precision() {
        let dir = tempfile::tempdir().unwrap();
        let text = "0.125,3.5\n1.75,0.0625\n";
        let from_csv = parse_features_csv(text).unwrap();
        let path = dir.path().join("f.vdsf");
        save_features_binary(&from_csv, &path).unwrap();
        let from_binary = load_features_binary(&path).unwrap();
        for (a, b) in from_csv.values().iter().zip(from_binary.values()) {
            assert_eq!(*a as f32, *b as f32);
        }
    }

    #[test]
    fn concepts_universe_and_weights() {
        let text = r#"{"item": 0, "concepts": ["a", "b"]}
{"item": 1, "concepts": ["b", "c"]}
{"weights": {"a": 2.0}}
"#;
        let cd = parse_concepts(text, 2, None).unwrap();
        assert_eq!(cd.concepts, vec!["a", "b", "c"]);
        assert_eq!(cd.weights, vec![2.0, 1.0, 1.0]);
        assert_eq!(cd.items[0], vec![0, 1]);
        assert_eq!(cd.items[1], vec![1, 2]);
    }

    #[test]
    fn concepts_empty_item_is_valid() {
        let cd = parse_concepts(r#"{"item": 0, "concepts": []}"#, 2, None).unwrap();
        assert!(cd.items[0].is_empty());
        assert!(cd.items[1].is_empty());
    }

    #[test]
    fn concepts_unknown_item() {
        let err = parse_concepts(r#"{"item": "x", "concepts": ["a"]}"#, 1, Some(&["a".into()])).unwrap_err();
        assert!(matches!(err, Error::UnknownItem(_)));
    }

    #[test]
    fn concepts_negative_weight() {
        let err = parse_concepts(r#"{"weights": {"a": -1}}"#, 1, None).unwrap_err();
        assert!(matches!(err, Error::InvalidWeight(_)));
    }

    #[test]
    fn probabilities_parse_and_range() {
        let pt = parse_probabilities("cat,dog\n0.5,0\n0.5,0\n").unwrap();
        assert_eq!(pt.concepts, vec!["cat", "dog"]);
        assert_eq!(pt.n, 2);
        assert_eq!(pt.probs, vec![0.5, 0.0, 0.5, 0.0]);
        assert!(matches!(
            parse_probabilities("cat\n1.2\n"),
            Err(Error::InvalidProbability(_))
        ));
    }

    #[test]
    fn snippet_aggregation_means_rows() {
        let fm = FeatureMatrix::from_parts(2, 2, vec![0.0, 2.0, 2.0, 0.0], None).unwrap();
        let idx = SnippetIndex {
            snippets: vec![Snippet { id: "s0".into(), frames: vec![0, 1], cost: 2.0 }],
            frame_count: 2,
        };
        let (agg, costs) = aggregate_snippets(&fm, &idx).unwrap();
        assert_eq!(agg.row(0), &[1.0, 1.0]);
        assert_eq!(costs, vec![2.0]);
    }

    #[test]
    fn snippet_singleton_passthrough_and_shape() {
        let fm = FeatureMatrix::from_parts(4, 2, vec![1., 0., 0., 1., 2., 2., 4., 4.], None).unwrap();
        let idx = SnippetIndex {
            snippets: vec![
                Snippet { id: "a".into(), frames: vec![0], cost: 1.0 },
                Snippet { id: "b".into(), frames: vec![1, 2, 3], cost: 3.0 },
            ],
            frame_count: 4,
        };
        let (agg, _) = aggregate_snippets(&fm, &idx).unwrap();
        assert_eq!(agg.n(), 2);
        assert_eq!(agg.row(0), &[1.0, 0.0]);
        assert_eq!(agg.row(1)[0], 2.0);
        assert!((agg.row(1)[1] - 7.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn query_filter_thresholds() {
        let idx = SnippetIndex {
            snippets: vec![
                Snippet { id: "s0".into(), frames: vec![0, 1], cost: 1.0 },
                Snippet { id: "s1".into(), frames: vec![2, 3], cost: 1.0 },
            ],
            frame_count: 4,
        };
        let mut tags = TagTable { per_item: vec![Vec::new(); 4] };
        tags.per_item[3].push(("beach".into(), 0.5));

        let kept = filter_by_query(&idx, &tags, "Beach", 0.5).unwrap();
        assert_eq!(kept.index.snippets.len(), 1);
        assert_eq!(kept.provenance, vec![1]);
        assert!(!kept.warning);

        let dropped = filter_by_query(&idx, &tags, "beach", 0.9).unwrap();
        assert!(dropped.index.snippets.is_empty());
        assert!(dropped.warning);

        let none = filter_by_query(&idx, &TagTable { per_item: vec![Vec::new(); 4] }, "beach", 0.5).unwrap();
        assert!(none.warning);
    }
}
