use motkit::geometry::dist3d;
use motkit::{iou, BBox, Homography, ImagePoint, WorldPoint};
use nalgebra::Matrix3;
use proptest::prelude::*;

fn bbox() -> impl Strategy<Value = BBox> {
    (-100.0..500.0f64, -100.0..500.0f64, 0.5..200.0f64, 0.5..200.0f64).prop_map(|(l, t, w, h)| BBox::new(l, t, w, h))
}

fn point() -> impl Strategy<Value = WorldPoint> {
    (-1e3..1e3f64, -1e3..1e3f64, -10.0..10.0f64).prop_map(|(x, y, z)| WorldPoint::new(x, y, z))
}

#[test]
fn shifted_box_overlaps_by_a_third() {
    let a = BBox::new(1.0, 1.0, 10.0, 10.0);
    let b = BBox::new(6.0, 1.0, 10.0, 10.0);
    assert!((iou(&a, &b) - 1.0 / 3.0).abs() < 1e-15);
}

proptest! {
    #[test]
    fn iou_is_symmetric_and_bounded(a in bbox(), b in bbox()) {
        let v = iou(&a, &b);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(v, iou(&b, &a));
        prop_assert!((iou(&a, &a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distance_is_a_metric(a in point(), b in point(), c in point()) {
        prop_assert!(dist3d(&a, &b) >= 0.0);
        prop_assert_eq!(dist3d(&a, &b), dist3d(&b, &a));
        prop_assert!(dist3d(&a, &c) <= dist3d(&a, &b) + dist3d(&b, &c) + 1e-9);
    }

    #[test]
    fn inverse_homography_undoes_the_mapping(
        m in prop::array::uniform9(-2.0..2.0f64),
        x in -100.0..100.0f64,
        y in -100.0..100.0f64,
    ) {
        // keep the matrix well conditioned by leaning on the identity
        let mut a = Matrix3::from_row_slice(&m) * 0.1 + Matrix3::identity();
        a[(2, 0)] *= 0.01;
        a[(2, 1)] *= 0.01;
        let h = Homography::new(a).unwrap();
        let inv = h.inverse().unwrap();
        let p = ImagePoint::new(x, y);
        let (u, v) = h.apply(p).unwrap();
        let (bx, by) = inv.apply(ImagePoint::new(u, v)).unwrap();
        prop_assert!((bx - x).abs() < 1e-9 && (by - y).abs() < 1e-9, "{:?} -> {:?}", (x, y), (bx, by));
    }
}
