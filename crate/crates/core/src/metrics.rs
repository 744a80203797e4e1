//! Evaluation measures over annotated ground truth: scene representation
//! R(X), concept coverage C(X), outlier-event hits D(X), the cluster hit
//! fraction M(X), and frame-level F1 against a reference summary.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationKind {
    Scene,
    OutlierEvent,
    Cluster,
    GroundtruthSummary,
}

#[derive(Debug, Clone)]
pub struct Segment {
    pub id: String,
    pub items: Vec<usize>,
}

/// A group of item segments of one kind. Segments of the scene, outlier,
/// and cluster kinds must not overlap; ground-truth summaries may.
#[derive(Debug, Clone)]
pub struct SegmentAnnotation {
    pub kind: AnnotationKind,
    pub segments: Vec<Segment>,
}

impl SegmentAnnotation {
    pub fn new(kind: AnnotationKind, segments: Vec<Segment>) -> Result<Self> {
        if kind != AnnotationKind::GroundtruthSummary {
            let mut seen = HashSet::new();
            for seg in &segments {
                for &i in &seg.items {
                    if !seen.insert(i) {
                        return Err(Error::InvalidAnnotation(format!(
                            "item {i} appears in two segments of a non-overlapping kind"
                        )));
                    }
                }
            }
        }
        Ok(SegmentAnnotation { kind, segments })
    }

    fn require(&self, kind: AnnotationKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::InvalidAnnotation(format!(
                "expected {kind:?} annotation, got {:?}",
                self.kind
            )));
        }
        if self.segments.is_empty() {
            return Err(Error::InvalidAnnotation("no segments".into()));
        }
        Ok(())
    }

    fn segments_hit(&self, selected: &[usize]) -> usize {
        let sel: HashSet<usize> = selected.iter().copied().collect();
        self.segments
            .iter()
            .filter(|seg| seg.items.iter().any(|i| sel.contains(i)))
            .count()
    }
}

/// Loads JSON-lines annotations (`{"segment": id, "kind": s, "items":
/// [ints]}`), grouped into one [`SegmentAnnotation`] per kind present.
pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<SegmentAnnotation>> {
    let text = std::fs::read_to_string(path)?;
    parse_annotations(&text)
}

pub fn parse_annotations(text: &str) -> Result<Vec<SegmentAnnotation>> {
    #[derive(serde::Deserialize)]
    struct Rec {
        segment: String,
        kind: AnnotationKind,
        items: Vec<usize>,
    }
    let mut by_kind: Vec<(AnnotationKind, Vec<Segment>)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: Rec = serde_json::from_str(line)
            .map_err(|e| Error::ParseError(format!("line {}: {e}", lineno + 1)))?;
        let seg = Segment { id: rec.segment, items: rec.items };
        match by_kind.iter_mut().find(|(k, _)| *k == rec.kind) {
            Some((_, segs)) => segs.push(seg),
            None => by_kind.push((rec.kind, vec![seg])),
        }
    }
    by_kind
        .into_iter()
        .map(|(kind, segments)| SegmentAnnotation::new(kind, segments))
        .collect()
}

/// R(X): fraction of scenes hit by at least one selected item.
pub fn representation_score(selected: &[usize], ann: &SegmentAnnotation) -> Result<f64> {
    ann.require(AnnotationKind::Scene)?;
    Ok(ann.segments_hit(selected) as f64 / ann.segments.len() as f64)
}

/// C(X) = |U(X)| / |U(V)| over unweighted per-item concept sets.
pub fn coverage_score(selected: &[usize], concepts_per_item: &[Vec<u32>]) -> Result<f64> {
    let universe: HashSet<u32> = concepts_per_item.iter().flatten().copied().collect();
    if universe.is_empty() {
        return Err(Error::InvalidAnnotation("concept universe is empty".into()));
    }
    let covered: HashSet<u32> = selected
        .iter()
        .flat_map(|&i| concepts_per_item[i].iter().copied())
        .collect();
    Ok(covered.len() as f64 / universe.len() as f64)
}

/// D(X): number of distinct outlier events hit (each counts once).
pub fn outlier_score(selected: &[usize], ann: &SegmentAnnotation) -> Result<usize> {
    ann.require(AnnotationKind::OutlierEvent)?;
    Ok(ann.segments_hit(selected))
}

/// D(X) / k, the normalized variant of [`outlier_score`].
pub fn outlier_score_normalized(selected: &[usize], ann: &SegmentAnnotation) -> Result<f64> {
    ann.require(AnnotationKind::OutlierEvent)?;
    Ok(ann.segments_hit(selected) as f64 / ann.segments.len() as f64)
}

/// M(X): cluster hit fraction, the same min-capped form as R(X) applied to
/// similar-frame clusters.
pub fn cluster_diversity_score(selected: &[usize], ann: &SegmentAnnotation) -> Result<f64> {
    ann.require(AnnotationKind::Cluster)?;
    Ok(ann.segments_hit(selected) as f64 / ann.segments.len() as f64)
}

/// Frame-level (precision, recall, F1) of a selection against a reference
/// summary. Degenerate denominators yield 0, not an error.
pub fn f1_score(
    selected_frames: &[usize],
    groundtruth_frames: &[usize],
    total_frames: usize,
) -> Result<(f64, f64, f64)> {
    let x: HashSet<usize> = selected_frames.iter().copied().collect();
    let gt: HashSet<usize> = groundtruth_frames.iter().copied().collect();
    for &f in x.iter().chain(gt.iter()) {
        if f >= total_frames {
            return Err(Error::InvalidAnnotation(format!(
                "frame {f} out of range (total {total_frames})"
            )));
        }
    }
    let hits = x.intersection(&gt).count() as f64;
    let precision = if x.is_empty() { 0.0 } else { hits / x.len() as f64 };
    let recall = if gt.is_empty() { 0.0 } else { hits / gt.len() as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok((precision, recall, f1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenes(groups: &[&[usize]]) -> SegmentAnnotation {
        SegmentAnnotation::new(
            AnnotationKind::Scene,
            groups
                .iter()
                .enumerate()
                .map(|(i, g)| Segment { id: format!("s{i}"), items: g.to_vec() })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn representation_hits() {
        let ann = scenes(&[&[0, 1], &[2, 3]]);
        assert_eq!(representation_score(&[0, 2], &ann).unwrap(), 1.0);
        assert_eq!(representation_score(&[0, 1], &ann).unwrap(), 0.5);
        assert_eq!(representation_score(&[], &ann).unwrap(), 0.0);
    }

    #[test]
    fn representation_rejects_wrong_kind_and_empty() {
        let ann = SegmentAnnotation::new(AnnotationKind::Cluster, vec![Segment { id: "c".into(), items: vec![0] }]).unwrap();
        assert!(representation_score(&[0], &ann).is_err());
        let empty = SegmentAnnotation::new(AnnotationKind::Scene, vec![]).unwrap();
        assert!(representation_score(&[0], &empty).is_err());
    }

    #[test]
    fn coverage_fraction() {
        let concepts = vec![vec![0, 1], vec![2], vec![3]];
        assert_eq!(coverage_score(&[0, 1], &concepts).unwrap(), 0.75);
        assert_eq!(coverage_score(&[], &concepts).unwrap(), 0.0);
        assert_eq!(coverage_score(&[0, 1, 2], &concepts).unwrap(), 1.0);
    }

    #[test]
    fn outlier_counts_events_once() {
        let ann = SegmentAnnotation::new(
            AnnotationKind::OutlierEvent,
            vec![
                Segment { id: "e0".into(), items: vec![5] },
                Segment { id: "e1".into(), items: vec![9] },
            ],
        )
        .unwrap();
        assert_eq!(outlier_score(&[5, 9, 1], &ann).unwrap(), 2);
        assert_eq!(outlier_score(&[1], &ann).unwrap(), 0);

        let merged = SegmentAnnotation::new(
            AnnotationKind::OutlierEvent,
            vec![Segment { id: "e0".into(), items: vec![5, 6] }],
        )
        .unwrap();
        assert_eq!(outlier_score(&[5, 6], &merged).unwrap(), 1);
    }

    #[test]
    fn f1_examples() {
        let gt: Vec<usize> = (0..10).collect();
        let x: Vec<usize> = (0..5).collect();
        let (p, r, f1) = f1_score(&x, &gt, 20).unwrap();
        assert_eq!(p, 1.0);
        assert_eq!(r, 0.5);
        assert!((f1 - 2.0 / 3.0).abs() <= 1e-12);

        assert_eq!(f1_score(&[], &gt, 20).unwrap(), (0.0, 0.0, 0.0));
        let (p, r, f1) = f1_score(&gt, &gt, 20).unwrap();
        assert_eq!((p, r, f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn cluster_hit_fraction() {
        let ann = SegmentAnnotation::new(
            AnnotationKind::Cluster,
            vec![
                Segment { id: "c0".into(), items: vec![0, 1] },
                Segment { id: "c1".into(), items: vec![2] },
                Segment { id: "c2".into(), items: vec![3] },
            ],
        )
        .unwrap();
        assert_eq!(cluster_diversity_score(&[0, 2, 3], &ann).unwrap(), 1.0);
        assert!((cluster_diversity_score(&[0, 1], &ann).unwrap() - 1.0 / 3.0).abs() <= 1e-12);
        assert_eq!(cluster_diversity_score(&[], &ann).unwrap(), 0.0);
    }

    #[test]
    fn overlap_rule() {
        let err = SegmentAnnotation::new(
            AnnotationKind::Scene,
            vec![
                Segment { id: "a".into(), items: vec![0, 1] },
                Segment { id: "b".into(), items: vec![1, 2] },
            ],
        );
        assert!(err.is_err());
        let ok = SegmentAnnotation::new(
            AnnotationKind::GroundtruthSummary,
            vec![
                Segment { id: "a".into(), items: vec![0, 1] },
                Segment { id: "b".into(), items: vec![1, 2] },
            ],
        );
        assert!(ok.is_ok());
    }
}
