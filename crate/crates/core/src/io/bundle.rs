//! Directory-level loading: result bundles, per-sequence files, sidecars.
//!
//! A bundle directory holds one `<Sequence-Name>.txt` per sequence. Ground
//! truth and detection directories use the same layout; metadata sidecars
//! sit next to them as `<Sequence-Name>.meta`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{parse_mot_file, sort_entries, EntryRole, MotEntry, SeqMap, SequenceMeta};
use crate::{Error, Result};

pub const SEQUENCE_EXT: &str = "txt";
pub const META_EXT: &str = "meta";
pub const HOMOGRAPHY_EXT: &str = "homography";

/// Entries per sequence, keyed by sequence name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultBundle {
    sequences: BTreeMap<String, Vec<MotEntry>>,
}

impl ResultBundle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a sequence; a name may only be added once.
    pub fn insert(&mut self, name: impl Into<String>, entries: Vec<MotEntry>) -> Result<()> {
        let name = name.into();
        if self.sequences.contains_key(&name) {
            return Err(Error::DuplicateSequence(name));
        }
        self.sequences.insert(name, entries);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&[MotEntry]> {
        self.sequences.get(name).map(Vec::as_slice)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.sequences.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[MotEntry])> {
        self.sequences.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    /// Errors with the first sequence of `seqmap` that is absent.
    pub fn require(&self, seqmap: &SeqMap) -> Result<()> {
        match seqmap.iter().find(|n| !self.sequences.contains_key(*n)) {
            Some(missing) => Err(Error::MissingSequence(missing.to_string())),
            None => Ok(()),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Reads and parses one MOT file, sorting entries by `(frame, id)`.
pub fn load_mot_path(path: &Path, role: EntryRole) -> Result<Vec<MotEntry>> {
    let text = read_text(path)?;
    let mut entries = parse_mot_file(&text, role).map_err(|source| Error::FileFormat {
        path: path.to_path_buf(),
        source,
    })?;
    sort_entries(&mut entries);
    Ok(entries)
}

pub fn sequence_path(root: &Path, name: &str) -> PathBuf {
    root.join(format!("{name}.{SEQUENCE_EXT}"))
}

pub fn meta_path(root: &Path, name: &str) -> PathBuf {
    root.join(format!("{name}.{META_EXT}"))
}

pub fn homography_path(root: &Path, name: &str) -> PathBuf {
    root.join(format!("{name}.{HOMOGRAPHY_EXT}"))
}

/// Loads every `*.txt` in `dir` as a result file. With a sequence map, each
/// listed sequence must be present.
pub fn load_result_bundle(dir: &Path, seqmap: Option<&SeqMap>) -> Result<ResultBundle> {
    let mut bundle = ResultBundle::new();
    let mut paths = Vec::new();
    for item in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = item.map_err(|e| Error::io(dir, e))?.path();
        let is_txt = path
            .extension()
            .and_then(|x| x.to_str())
            .is_some_and(|x| x.eq_ignore_ascii_case(SEQUENCE_EXT));
        if is_txt && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();
    for path in paths {
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
            continue;
        };
        let entries = load_mot_path(&path, EntryRole::Result)?;
        bundle.insert(stem, entries)?;
    }
    if let Some(map) = seqmap {
        bundle.require(map)?;
    }
    Ok(bundle)
}

/// Loads exactly the sequences of `seqmap` from `root`, in the given role.
pub fn load_sequences(root: &Path, seqmap: &SeqMap, role: EntryRole) -> Result<ResultBundle> {
    let mut bundle = ResultBundle::new();
    for name in seqmap.iter() {
        let path = sequence_path(root, name);
        if !path.is_file() {
            return Err(Error::MissingSequence(name.to_string()));
        }
        bundle.insert(name, load_mot_path(&path, role)?)?;
    }
    Ok(bundle)
}

/// Reads `<root>/<name>.meta` if it exists.
pub fn load_meta(root: &Path, name: &str) -> Result<Option<SequenceMeta>> {
    let path = meta_path(root, name);
    if !path.is_file() {
        return Ok(None);
    }
    SequenceMeta::parse(&read_text(&path)?)
        .map(Some)
        .map_err(|e| Error::Metadata(format!("{}: {e}", path.display())))
}

pub fn load_seqmap(path: &Path) -> Result<SeqMap> {
    SeqMap::parse(&read_text(path)?)
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let file_name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{file_name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = "1,1,10,10,20,40,1,-1,-1,-1\n";

    #[test]
    fn bundle_keyed_by_stem() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("TUD-Campus.txt"), LINE).unwrap();
        fs::write(dir.path().join("notes.md"), "ignored").unwrap();
        let b = load_result_bundle(dir.path(), None).unwrap();
        assert_eq!(b.names().collect::<Vec<_>>(), vec!["TUD-Campus"]);
        assert_eq!(b.get("TUD-Campus").unwrap().len(), 1);
    }

    #[test]
    fn missing_sequence_is_named() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("TUD-Campus.txt"), LINE).unwrap();
        let map = SeqMap::new(["TUD-Campus", "Venice-1"]).unwrap();
        match load_result_bundle(dir.path(), Some(&map)) {
            Err(Error::MissingSequence(n)) => assert_eq!(n, "Venice-1"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            load_sequences(dir.path(), &map, EntryRole::GroundTruth),
            Err(Error::MissingSequence(_))
        ));
    }

    #[test]
    fn format_errors_carry_the_path() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("A.txt"), "1,1,10,10,20,40,1,-1,-1\n").unwrap();
        let err = load_result_bundle(dir.path(), None).unwrap_err();
        let msg = format!("{err}: {}", std::error::Error::source(&err).unwrap());
        assert!(msg.contains("A.txt") && msg.contains("line 1"), "{msg}");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("x.txt");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
