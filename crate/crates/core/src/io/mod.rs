//! Reading and writing the MOT CSV format and the files around it.

mod bundle;
mod meta;
mod mot;
mod trajectory;

pub use bundle::{
    homography_path, load_meta, load_mot_path, load_result_bundle, load_seqmap, load_sequences,
    meta_path, read_text, sequence_path, write_atomic, ResultBundle, HOMOGRAPHY_EXT, META_EXT,
    SEQUENCE_EXT,
};
pub use meta::{Camera, SeqMap, SequenceMeta, Viewpoint, Weather};
pub use mot::{
    parse_mot_file, sort_entries, write_mot_file, EntryRole, FormatError, FormatErrorKind,
    MotEntry, FIELD_COUNT, UNSET,
};
pub use trajectory::{flatten, Trajectory};
