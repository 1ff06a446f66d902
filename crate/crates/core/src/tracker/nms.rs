use crate::geometry::iou;
use crate::io::MotEntry;

/// Greedy non-maximum suppression over the detections of one frame.
///
/// Repeatedly keeps the highest-scoring remaining detection and drops every
/// other detection overlapping it by more than `overlap`. Equal scores keep
/// input order. Returns indices into `dets` of the kept detections, best
/// first.
pub fn nms(dets: &[MotEntry], overlap: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| dets[b].conf.total_cmp(&dets[a].conf).then(a.cmp(&b)));

    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let b = dets[i].bbox();
        if kept.iter().all(|&k| iou(&dets[k].bbox(), &b) <= overlap) {
            kept.push(i);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BBox;

    fn det(left: f64, conf: f64) -> MotEntry {
        MotEntry::new(1, -1, BBox::new(left, 0.0, 10.0, 10.0)).with_conf(conf)
    }

    #[test]
    fn identical_boxes_keep_best() {
        assert_eq!(nms(&[det(0.0, 0.8), det(0.0, 0.9)], 0.5), vec![1]);
    }

    #[test]
    fn disjoint_boxes_all_kept() {
        assert_eq!(nms(&[det(0.0, 0.5), det(50.0, 0.7), det(100.0, 0.6)], 0.3), vec![1, 2, 0]);
    }

    #[test]
    fn chain_keeps_both_ends() {
        // A-B and B-C overlap with IoU 1/3 each, A and C are disjoint
        let dets = [det(0.0, 0.9), det(5.0, 0.8), det(10.0, 0.7)];
        assert!(iou(&dets[0].bbox(), &dets[1].bbox()) > 0.3);
        assert_eq!(nms(&dets, 0.3), vec![0, 2]);
    }

    #[test]
    fn threshold_is_exclusive() {
        let dets = [det(0.0, 0.9), det(5.0, 0.8)];
        let o = iou(&dets[0].bbox(), &dets[1].bbox());
        assert_eq!(nms(&dets, o).len(), 2);
    }
}
