//! JSON wire formats for links, scenes, patterns, schedules and planes.
//!
//! Formats are stable and deterministic: serializing a parsed value
//! reproduces the same bytes, and identical inputs give byte-identical
//! outputs.

use nalgebra::{Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{Plane2in4, RP2Pair};
use crate::pattern::{IntersectionPattern, Schedule, Sign};
use crate::plgeom::{Scene, TriMesh};
use crate::quat::Quaternion;
use crate::retraction::{Frame, PrismPoint, StageRecord};
use crate::roundlink::{OrientedRoundHopfLink, RoundCircle};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircleDto {
    pub center: [f64; 3],
    pub radius: f64,
    pub normal: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkDto {
    pub components: Vec<CircleDto>,
}

impl From<&RoundCircle> for CircleDto {
    fn from(c: &RoundCircle) -> Self {
        Self {
            center: c.center().into(),
            radius: c.radius(),
            normal: c.normal().into(),
        }
    }
}

impl CircleDto {
    pub fn to_circle(&self) -> Result<RoundCircle> {
        let center = Vector3::from(self.center);
        let normal = Vector3::from(self.normal);
        // keep already-unit normals bit-for-bit so emit ∘ parse = id
        if (normal.norm() - 1.0).abs() <= crate::roundlink::NORMAL_TOL {
            RoundCircle::new(center, self.radius, normal)
        } else {
            RoundCircle::from_unnormalized(center, self.radius, normal)
        }
    }
}

pub fn link_to_dto(link: &OrientedRoundHopfLink) -> LinkDto {
    LinkDto {
        components: vec![link.first().into(), link.second().into()],
    }
}

pub fn link_from_dto(dto: &LinkDto) -> Result<OrientedRoundHopfLink> {
    if dto.components.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "a link needs exactly 2 components, got {}",
            dto.components.len()
        )));
    }
    OrientedRoundHopfLink::new(
        dto.components[0].to_circle()?,
        dto.components[1].to_circle()?,
    )
}

pub fn parse_link(json: &str) -> Result<OrientedRoundHopfLink> {
    let dto: LinkDto = serde_json::from_str(json)?;
    link_from_dto(&dto)
}

/// Parses the two circles without validating the Hopf condition (for
/// commands that report the linking number of arbitrary circle pairs).
pub fn parse_circle_pair(json: &str) -> Result<(RoundCircle, RoundCircle)> {
    let dto: LinkDto = serde_json::from_str(json)?;
    if dto.components.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "expected exactly 2 components, got {}",
            dto.components.len()
        )));
    }
    Ok((
        dto.components[0].to_circle()?,
        dto.components[1].to_circle()?,
    ))
}

pub fn link_to_json(link: &OrientedRoundHopfLink) -> String {
    serde_json::to_string(&link_to_dto(link)).expect("serializable")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshDto {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SceneDto {
    pub disc_mesh: MeshDto,
    pub equator: CircleDto,
    pub h_range: [f64; 2],
}

pub fn scene_to_dto(scene: &Scene) -> SceneDto {
    SceneDto {
        disc_mesh: MeshDto {
            vertices: scene
                .disc_mesh
                .vertices()
                .iter()
                .map(|v| (*v).into())
                .collect(),
            triangles: scene.disc_mesh.triangles().to_vec(),
        },
        equator: (&scene.equator).into(),
        h_range: [scene.h_range.0, scene.h_range.1],
    }
}

pub fn scene_from_dto(dto: &SceneDto) -> Result<Scene> {
    let mesh = TriMesh::new(
        dto.disc_mesh
            .vertices
            .iter()
            .map(|v| Vector3::from(*v))
            .collect(),
        dto.disc_mesh.triangles.clone(),
    )?;
    Ok(Scene {
        disc_mesh: mesh,
        equator: dto.equator.to_circle()?,
        h_range: (dto.h_range[0], dto.h_range[1]),
    })
}

pub fn parse_scene(json: &str) -> Result<Scene> {
    let dto: SceneDto = serde_json::from_str(json)?;
    scene_from_dto(&dto)
}

pub fn scene_to_json(scene: &Scene) -> String {
    serde_json::to_string(&scene_to_dto(scene)).expect("serializable")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternPointDto {
    pub index: usize,
    pub sign: Sign,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternCircleDto {
    pub inside: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternDto {
    pub points: Vec<PatternPointDto>,
    pub chords: Vec<[usize; 2]>,
    pub alpha: [usize; 2],
    pub circles: Vec<PatternCircleDto>,
}

pub fn pattern_to_dto(p: &IntersectionPattern) -> PatternDto {
    PatternDto {
        points: p
            .points()
            .iter()
            .map(|(index, sign)| PatternPointDto {
                index: *index,
                sign: *sign,
            })
            .collect(),
        chords: p
            .chords()
            .iter()
            .map(|c| [c.endpoints.0, c.endpoints.1])
            .collect(),
        alpha: [p.alpha().0, p.alpha().1],
        circles: p
            .circles()
            .iter()
            .map(|c| PatternCircleDto { inside: c.inside })
            .collect(),
    }
}

pub fn pattern_from_dto(dto: &PatternDto) -> Result<IntersectionPattern> {
    // labels must be dense 0..2n in the wire format
    let mut signs = vec![None; dto.points.len()];
    for p in &dto.points {
        if p.index >= signs.len() || signs[p.index].is_some() {
            return Err(Error::InvalidInput(format!(
                "pattern point indices must be a permutation of 0..{}",
                signs.len()
            )));
        }
        signs[p.index] = Some(p.sign);
    }
    IntersectionPattern::new(
        signs.into_iter().map(|s| s.expect("dense")).collect(),
        (dto.alpha[0], dto.alpha[1]),
        dto.chords.iter().map(|c| (c[0], c[1])).collect(),
        dto.circles.iter().map(|c| c.inside).collect(),
    )
}

pub fn parse_pattern(json: &str) -> Result<IntersectionPattern> {
    let dto: PatternDto = serde_json::from_str(json)?;
    pattern_from_dto(&dto)
}

pub fn pattern_to_json(p: &IntersectionPattern) -> String {
    serde_json::to_string(&pattern_to_dto(p)).expect("serializable")
}

pub fn schedule_to_json(s: &Schedule) -> String {
    serde_json::to_string(s).expect("serializable")
}

pub fn parse_schedule(json: &str) -> Result<Schedule> {
    Ok(serde_json::from_str(json)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaneDto {
    pub x: [f64; 4],
    pub y: [f64; 4],
}

pub fn plane_to_dto(p: &Plane2in4) -> PlaneDto {
    PlaneDto {
        x: p.x().components(),
        y: p.y().components(),
    }
}

pub fn plane_from_dto(dto: &PlaneDto) -> Result<Plane2in4> {
    let q = |c: [f64; 4]| Quaternion::new(c[0], c[1], c[2], c[3]);
    Plane2in4::new(q(dto.x), q(dto.y))
}

pub fn parse_plane(json: &str) -> Result<Plane2in4> {
    let dto: PlaneDto = serde_json::from_str(json)?;
    plane_from_dto(&dto)
}

pub fn plane_to_json(p: &Plane2in4) -> String {
    serde_json::to_string(&plane_to_dto(p)).expect("serializable")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RP2PairDto {
    pub first: [f64; 3],
    pub second: [f64; 3],
}

pub fn rp2_pair_to_json(pair: &RP2Pair) -> String {
    let dto = RP2PairDto {
        first: pair.first.imag().into(),
        second: pair.second.imag().into(),
    };
    serde_json::to_string(&dto).expect("serializable")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct XiDto {
    pub mu: [f64; 3],
    pub nu: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrismPointDto {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub fn prism_point_to_json(p: &PrismPoint) -> String {
    let [w, x, y, z] = p.components();
    serde_json::to_string(&PrismPointDto { w, x, y, z }).expect("serializable")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageDto {
    pub stage: String,
    pub link: LinkDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<[[f64; 3]; 3]>,
}

fn frame_rows(frame: &Frame) -> [[f64; 3]; 3] {
    let m = frame.rotation().matrix();
    [
        [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
        [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
        [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
    ]
}

pub fn stage_to_json(record: &StageRecord) -> String {
    let dto = StageDto {
        stage: record.stage.to_string(),
        link: link_to_dto(&record.link),
        frame: record.frame.as_ref().map(frame_rows),
    };
    serde_json::to_string(&dto).expect("serializable")
}

pub fn vector4_to_array(v: &Vector4<f64>) -> [f64; 4] {
    [v.x, v.y, v.z, v.w]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn link_json_round_trip() {
        let link = fixtures::basepoint_link();
        let json = link_to_json(&link);
        let parsed = parse_link(&json).unwrap();
        assert_eq!(link_to_json(&parsed), json);
    }

    #[test]
    fn link_json_matches_documented_shape() {
        let json = link_to_json(&fixtures::basepoint_link());
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(
            v["components"][0]["center"],
            serde_json::json!([0.0, 0.0, 0.0])
        );
        assert_eq!(v["components"][0]["radius"], serde_json::json!(1.0));
        assert_eq!(
            v["components"][1]["normal"],
            serde_json::json!([0.0, 1.0, 0.0])
        );
    }

    #[test]
    fn malformed_link_is_rejected() {
        assert!(parse_link("{\"components\": []}").is_err());
        assert!(parse_link("not json").is_err());
    }

    #[test]
    fn pattern_json_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(70);
        for _ in 0..50 {
            let p = crate::sample::random_pattern(&mut rng, 10, 5);
            let json = pattern_to_json(&p);
            let parsed = parse_pattern(&json).unwrap();
            assert_eq!(pattern_to_json(&parsed), json);
            assert_eq!(parsed.canonical_code(), p.canonical_code());
        }
    }

    #[test]
    fn scene_json_round_trip() {
        let scene = fixtures::basepoint_scene(16);
        let json = scene_to_json(&scene);
        let parsed = parse_scene(&json).unwrap();
        assert_eq!(scene_to_json(&parsed), json);
    }

    #[test]
    fn plane_json_round_trip() {
        let (v, _) = fixtures::basepoint_great_planes();
        let json = plane_to_json(&v);
        let parsed = parse_plane(&json).unwrap();
        assert_eq!(plane_to_json(&parsed), json);
    }

    #[test]
    fn schedule_json_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        let p = crate::sample::random_pattern(&mut rng, 8, 2);
        let s = crate::pattern::make_schedule(&p).unwrap();
        let json = schedule_to_json(&s);
        let parsed = parse_schedule(&json).unwrap();
        assert_eq!(schedule_to_json(&parsed), json);
    }
}
