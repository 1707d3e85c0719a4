//! JSON formats for scenes, cut sets, cycles and depth orders.
//!
//! Every scalar is written as a `"p/q"` (or integer) string, so a file read
//! and written again is byte-identical.

use serde::{Deserialize, Serialize};

use crate::depth::SimpleCycle;
use crate::geom::{
    serde_triple, CrossingPoint, CutSet, GeomError, Interval, Line3, Object, ObjectId, Piece,
    Point3, Scalar, Scene, SceneKind, Segment3,
};
use crate::scenes::GeneratorSpec;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("object {id} does not fit a scene of {kind}")]
    WrongFields { id: ObjectId, kind: SceneKind },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Serialize, Deserialize)]
struct SceneFile {
    kind: SceneKind,
    objects: Vec<ObjectFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<GeneratorSpec>,
}

#[derive(Serialize, Deserialize)]
struct ObjectFile {
    id: ObjectId,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_triple")]
    origin: Option<[Scalar; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_triple")]
    direction: Option<[Scalar; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_triple")]
    a: Option<[Scalar; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_triple")]
    b: Option<[Scalar; 3]>,
}

mod opt_triple {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "serde_triple")] [Scalar; 3]);

    pub fn serialize<S: Serializer>(v: &Option<[Scalar; 3]>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|t| Wrap(t.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<[Scalar; 3]>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

fn object_file(o: &Object) -> ObjectFile {
    match o {
        Object::Line(l) => ObjectFile {
            id: l.id,
            origin: Some(l.origin.to_array()),
            direction: Some(l.direction.to_array()),
            a: None,
            b: None,
        },
        Object::Segment(s) => ObjectFile {
            id: s.id,
            origin: None,
            direction: None,
            a: Some(s.a.to_array()),
            b: Some(s.b.to_array()),
        },
    }
}

fn object_from_file(kind: SceneKind, f: ObjectFile) -> Result<Object, IoError> {
    let wrong = || IoError::WrongFields { id: f.id, kind };
    match kind {
        SceneKind::Lines => {
            if f.a.is_some() || f.b.is_some() {
                return Err(wrong());
            }
            let (Some(o), Some(d)) = (f.origin.clone(), f.direction.clone()) else {
                return Err(wrong());
            };
            Ok(Object::Line(Line3::new(
                f.id,
                Point3::from_array(o),
                Point3::from_array(d),
            )))
        }
        SceneKind::Segments => {
            if f.origin.is_some() || f.direction.is_some() {
                return Err(wrong());
            }
            let (Some(a), Some(b)) = (f.a.clone(), f.b.clone()) else {
                return Err(wrong());
            };
            Ok(Object::Segment(Segment3::new(
                f.id,
                Point3::from_array(a),
                Point3::from_array(b),
            )))
        }
    }
}

/// Pretty-printed scene JSON.
pub fn scene_to_json(scene: &Scene) -> String {
    let file = SceneFile {
        kind: scene.kind(),
        objects: scene.objects().iter().map(object_file).collect(),
        meta: scene.meta.clone(),
    };
    serde_json::to_string_pretty(&file).expect("scene serialization cannot fail")
}

/// Parses a scene. Line directions are sign-normalized on load.
pub fn scene_from_json(text: &str) -> Result<Scene, IoError> {
    let file: SceneFile = serde_json::from_str(text)?;
    let objects = file
        .objects
        .into_iter()
        .map(|o| object_from_file(file.kind, o))
        .collect::<Result<Vec<_>, _>>()?;
    let scene = Scene::new(file.kind, objects)?;
    Ok(match file.meta {
        Some(meta) => scene.with_meta(meta),
        None => scene,
    })
}

pub fn cuts_to_json(cuts: &CutSet) -> String {
    serde_json::to_string_pretty(cuts).expect("cut serialization cannot fail")
}

pub fn cuts_from_json(text: &str) -> Result<CutSet, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// A piece as written in cycle and order dumps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceRecord {
    pub piece: usize,
    pub object: ObjectId,
    /// `[lo, hi]`, `null` for an infinite end.
    pub interval: [Option<String>; 2],
}

impl PieceRecord {
    pub fn new(p: &Piece) -> Self {
        PieceRecord {
            piece: p.id,
            object: p.parent,
            interval: interval_strings(&p.interval),
        }
    }
}

fn interval_strings(iv: &Interval) -> [Option<String>; 2] {
    [
        iv.lo.as_ref().map(crate::geom::format_scalar),
        iv.hi.as_ref().map(crate::geom::format_scalar),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub pieces: Vec<PieceRecord>,
    pub crossings: Vec<CrossingPoint>,
}

pub fn cycle_to_json(cycle: &SimpleCycle, pieces: &[Piece]) -> String {
    let record = CycleRecord {
        pieces: cycle
            .pieces
            .iter()
            .map(|&p| PieceRecord::new(&pieces[p]))
            .collect(),
        crossings: cycle.crossings.clone(),
    };
    serde_json::to_string_pretty(&record).expect("cycle serialization cannot fail")
}

/// A depth order, back to front.
pub fn order_to_json(order: &[usize], pieces: &[Piece]) -> String {
    let records: Vec<PieceRecord> = order
        .iter()
        .map(|&p| PieceRecord::new(&pieces[p]))
        .collect();
    serde_json::to_string_pretty(&records).expect("order serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, ratio};
    use crate::scenes::{generate, triangle_scene, GeneratorKind};

    #[test]
    fn triangle_round_trips_byte_for_byte() {
        let text = scene_to_json(&triangle_scene());
        let back = scene_from_json(&text).unwrap();
        assert_eq!(back, triangle_scene());
        assert_eq!(scene_to_json(&back), text);
    }

    #[test]
    fn generated_scene_keeps_metadata() {
        let spec = crate::scenes::GeneratorSpec::new(GeneratorKind::RandomSegments, 6, 3);
        let s = generate(&spec).unwrap();
        let text = scene_to_json(&s);
        let back = scene_from_json(&text).unwrap();
        assert_eq!(back.meta, Some(spec));
        assert_eq!(scene_to_json(&back), text);
    }

    #[test]
    fn reads_the_documented_format() {
        let text = r#"{"kind":"lines","objects":[
            {"id":7,"origin":["1/2","0","-3"],"direction":["-1","2","4/6"]}]}"#;
        let s = scene_from_json(text).unwrap();
        let Object::Line(l) = &s.objects()[0] else {
            panic!()
        };
        assert_eq!(l.id, ObjectId(7));
        assert_eq!(l.origin.x, ratio(1, 2));
        assert_eq!(l.direction.x, int(1));
        assert_eq!(l.direction.z, ratio(-2, 3));
    }

    #[test]
    fn rejects_fields_of_the_other_kind() {
        let text = r#"{"kind":"segments","objects":[{"id":1,"origin":["0","0","0"],"direction":["1","0","0"]}]}"#;
        assert!(matches!(
            scene_from_json(text),
            Err(IoError::WrongFields { .. })
        ));
        assert!(matches!(scene_from_json("{"), Err(IoError::Json(_))));
        let bad_scalar = r#"{"kind":"lines","objects":[{"id":1,"origin":["x","0","0"],"direction":["1","0","0"]}]}"#;
        assert!(scene_from_json(bad_scalar).is_err());
    }

    #[test]
    fn cut_set_format() {
        let mut cuts = CutSet::new();
        cuts.insert(ObjectId(2), ratio(-7, 3));
        cuts.insert(ObjectId(1), int(5));
        let text = serde_json::to_string(&cuts).unwrap();
        assert_eq!(text, r#"[{"id":1,"t":"5"},{"id":2,"t":"-7/3"}]"#);
        assert_eq!(cuts_from_json(&cuts_to_json(&cuts)).unwrap(), cuts);
    }
}
