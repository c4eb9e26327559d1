#![allow(dead_code)]

use podar_core::geometry::{BodyGeometry, Vec2};
use podar_core::kinematics::KinematicState;
use podar_core::object::{ObjectType, RoadObject};
use podar_core::params::PodarParams;
use podar_core::risk::Scene;
use proptest::prelude::*;

prop_compose! {
    pub fn vec2(lo: f64, hi: f64)(x in lo..hi, y in lo..hi) -> Vec2 {
        Vec2::new(x, y)
    }
}

pub fn geometry() -> impl Strategy<Value = BodyGeometry> {
    prop_oneof![
        Just(BodyGeometry::Point),
        (0.5f64..5.0, 0.3f64..2.5)
            .prop_map(|(length, width)| BodyGeometry::Rectangle { length, width }),
    ]
}

pub fn object_type() -> impl Strategy<Value = ObjectType> {
    prop_oneof![
        Just(ObjectType::Vehicle),
        Just(ObjectType::Pedestrian),
        Just(ObjectType::Bicycle),
        Just(ObjectType::Obstacle),
    ]
}

prop_compose! {
    pub fn object(id: usize)(
        x in 3.0f64..120.0,
        y in -12.0f64..12.0,
        velocity in vec2(-15.0, 15.0),
        moving in any::<bool>(),
        heading in -3.0f64..3.0,
        geometry in geometry(),
        object_type in object_type(),
        mass in 0.2f64..3.0,
        sensitivity in 0.2f64..2.0,
    ) -> RoadObject {
        let v = if moving { velocity } else { Vec2::ZERO };
        RoadObject {
            id: format!("o{id}"),
            object_type,
            state: KinematicState::new(Vec2::new(x, y), v, heading).unwrap(),
            geometry,
            mass,
            sensitivity,
        }
    }
}

prop_compose! {
    pub fn host()(speed in 5.0f64..30.0, drift in -2.0f64..2.0) -> RoadObject {
        RoadObject::host(Vec2::ZERO, Vec2::new(speed, drift))
    }
}

pub fn scene(max_objects: usize) -> impl Strategy<Value = Scene> {
    (
        host(),
        (1..=max_objects).prop_flat_map(|n| (0..n).map(object).collect::<Vec<_>>()),
    )
        .prop_map(|(host, objects)| Scene::new(host, objects))
}

prop_compose! {
    pub fn params()(
        horizon in 1.0f64..7.0,
        k in 0.1f64..3.0,
        a in 0.0f64..2.0,
        b in 0.0f64..4.0,
    ) -> PodarParams {
        PodarParams::new(horizon, k, a, b).unwrap()
    }
}
