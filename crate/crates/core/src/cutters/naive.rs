use crate::geom::{scene_crossings, CutSet, GeomError, Scene};

/// Cuts both objects at every proper crossing.
pub fn naive_cut(scene: &Scene) -> Result<CutSet, GeomError> {
    let mut cuts = CutSet::new();
    for c in scene_crossings(scene)? {
        cuts.insert(scene.objects()[c.a].id(), c.crossing.ta);
        cuts.insert(scene.objects()[c.b].id(), c.crossing.tb);
    }
    Ok(cuts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutters::verify_cuts;
    use crate::geom::{int, Line3, ObjectId, Point3};
    use crate::scenes::{gen_random, triangle_scene};

    #[test]
    fn triangle_needs_six() {
        let s = triangle_scene();
        let cuts = naive_cut(&s).unwrap();
        assert_eq!(cuts.len(), 6);
        assert!(verify_cuts(&s, &cuts).unwrap());
    }

    #[test]
    fn single_object_needs_none() {
        let s = Scene::from_lines(vec![Line3::new(
            ObjectId(1),
            Point3::from_ints(0, 0, 0),
            Point3::from_ints(1, 2, 3),
        )]);
        assert!(naive_cut(&s).unwrap().is_empty());
    }

    #[test]
    fn general_position_lines_need_n_times_n_minus_one() {
        let s = gen_random(20, 9, &int(100)).unwrap();
        assert_eq!(naive_cut(&s).unwrap().len(), 20 * 19);
    }
}
