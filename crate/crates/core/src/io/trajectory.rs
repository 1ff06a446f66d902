use std::collections::BTreeMap;

use super::{EntryRole, MotEntry};
use crate::{Error, Result};

/// All entries sharing one id, ordered by frame with at most one entry per
/// frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    id: i64,
    entries: Vec<MotEntry>,
}

impl Trajectory {
    /// Builds a trajectory from entries that all carry `id`.
    pub fn new(id: i64, mut entries: Vec<MotEntry>) -> Result<Self> {
        entries.sort_by_key(|e| e.frame);
        for w in entries.windows(2) {
            if w[0].frame == w[1].frame {
                return Err(Error::DuplicateEntry {
                    role: "trajectory",
                    frame: w[0].frame,
                    id,
                });
            }
        }
        debug_assert!(entries.iter().all(|e| e.id == id));
        Ok(Trajectory { id, entries })
    }

    /// Groups entries by id. Trajectories are returned sorted by id.
    pub fn group(entries: &[MotEntry], role: EntryRole) -> Result<Vec<Trajectory>> {
        let mut by_id: BTreeMap<i64, Vec<MotEntry>> = BTreeMap::new();
        for e in entries {
            by_id.entry(e.id).or_default().push(*e);
        }
        by_id
            .into_iter()
            .map(|(id, es)| {
                Trajectory::new(id, es).map_err(|err| match err {
                    Error::DuplicateEntry { frame, id, .. } => Error::DuplicateEntry {
                        role: role.as_str(),
                        frame,
                        id,
                    },
                    other => other,
                })
            })
            .collect()
    }

    /// Groups ground truth, dropping entries flagged inactive. Ids whose
    /// entries are all inactive do not produce a trajectory.
    pub fn ground_truth(entries: &[MotEntry]) -> Result<Vec<Trajectory>> {
        let active: Vec<MotEntry> = entries.iter().filter(|e| e.is_active()).copied().collect();
        Self::group(&active, EntryRole::GroundTruth)
    }

    pub fn id(&self) -> i64 {
        self.id
    }

    pub fn entries(&self) -> &[MotEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn first_frame(&self) -> Option<u32> {
        self.entries.first().map(|e| e.frame)
    }

    pub fn last_frame(&self) -> Option<u32> {
        self.entries.last().map(|e| e.frame)
    }

    /// Number of frames between the first and last entry, inclusive.
    pub fn span(&self) -> u32 {
        match (self.first_frame(), self.last_frame()) {
            (Some(a), Some(b)) => b - a + 1,
            _ => 0,
        }
    }

    pub fn at(&self, frame: u32) -> Option<&MotEntry> {
        self.entries
            .binary_search_by_key(&frame, |e| e.frame)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn frames(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|e| e.frame)
    }
}

/// Flattens trajectories back into entries sorted by `(frame, id)`.
pub fn flatten(trajectories: &[Trajectory]) -> Vec<MotEntry> {
    let mut out: Vec<MotEntry> = trajectories.iter().flat_map(|t| t.entries.iter().copied()).collect();
    super::sort_entries(&mut out);
    out
}
