//! Small reference instances used by tests, docs and the CLI.

use crate::graph::{Arc, VertexId, Window, WindowedDag};
use crate::huc::{HucInstance, InitialState, OperatingPoint};
use crate::scalar::{int, parse_scalar, Scalar};

fn dec(s: &str) -> Scalar {
    parse_scalar(s).expect("fixture literal")
}

/// Five-vertex window-constrained instance `s, 1, 2, 3, p`.
///
/// Its five source-to-sink paths are (value, resource):
/// `s,1,3,2,p` (32, 35), `s,3,p` (27, 21), `s,1,2,p` (29, 25),
/// `s,1,3,p` (33, 16) and `s,3,2,p` (26, 40). Only `s,3,p` and `s,1,2,p`
/// respect every window.
pub fn example_dag() -> WindowedDag {
    let windows = vec![
        Window::at_least(int(0)),       // s
        Window::new(int(0), int(10)),   // 1
        Window::new(int(10), int(25)),  // 2
        Window::new(int(5), int(20)),   // 3
        Window::new(int(20), int(29)),  // p
    ];
    let arcs = vec![
        Arc::new(0, 1, int(11), int(5)),
        Arc::new(0, 3, int(15), int(15)),
        Arc::new(1, 3, int(10), int(5)),
        Arc::new(1, 2, int(13), int(10)),
        Arc::new(3, 2, int(6), int(15)),
        Arc::new(3, 4, int(12), int(6)),
        Arc::new(2, 4, int(5), int(10)),
    ];
    WindowedDag::new(windows, arcs, VertexId(0), VertexId(4))
        .expect("fixture is valid")
        .with_labels(["s", "1", "2", "3", "p"].map(String::from).to_vec())
}

/// Five-period single-plant instance with an idle point and two flow
/// increments (6 and 5), ramps of 6 and a three-period min-up/down.
///
/// Prices and water values reproduce the per-increment values
/// `W(·,t)` = (0, 2.8, 1), (0, -6.8, -6.2), (0, 0.4, -0.8), (0, -11.6, -9.8),
/// (0, 2.0, 0.4). The last period repeats the fourth period's volume window.
pub fn example_huc() -> HucInstance {
    HucInstance {
        periods: 5,
        points: vec![
            OperatingPoint { flow: int(0), power: int(0) },
            OperatingPoint { flow: int(6), power: int(8) },
            OperatingPoint { flow: int(5), power: int(6) },
        ],
        ramp_up: int(6),
        ramp_down: int(6),
        min_updown: 3,
        prices: ["2", "0.8", "1.7", "0.2", "1.9"].map(dec).to_vec(),
        phi1: dec("2.2"),
        phi2: int(0),
        win_lo: [0, 0, 7, 18, 18].map(int).to_vec(),
        win_hi: [11, 18, 18, 18, 18].map(int).to_vec(),
        initial: InitialState::default(),
    }
}

/// JSON text of [`example_dag`] in the instance file format.
pub const EXAMPLE_DAG_JSON: &str = r#"{
  "vertices": [
    {"id": "s", "lo": 0, "hi": null},
    {"id": "1", "lo": 0, "hi": 10},
    {"id": "2", "lo": 10, "hi": 25},
    {"id": "3", "lo": 5, "hi": 20},
    {"id": "p", "lo": 20, "hi": 29}
  ],
  "arcs": [
    {"from": "s", "to": "1", "value": 11, "resource": 5},
    {"from": "s", "to": "3", "value": 15, "resource": 15},
    {"from": "1", "to": "3", "value": 10, "resource": 5},
    {"from": "1", "to": "2", "value": 13, "resource": 10},
    {"from": "3", "to": "2", "value": 6, "resource": 15},
    {"from": "3", "to": "p", "value": 12, "resource": 6},
    {"from": "2", "to": "p", "value": 5, "resource": 10}
  ],
  "source": "s",
  "sink": "p"
}
"#;

/// JSON text of [`example_huc`] in the HUC file format.
pub const EXAMPLE_HUC_JSON: &str = r#"{
  "T": 5,
  "points": [{"D": 0, "P": 0}, {"D": 6, "P": 8}, {"D": 5, "P": 6}],
  "ramp_up": 6,
  "ramp_down": 6,
  "min_updown": 3,
  "prices": ["2", "0.8", "1.7", "0.2", "1.9"],
  "phi1": "2.2",
  "phi2": 0,
  "win_lo": [0, 0, 7, 18, 18],
  "win_hi": [11, 18, 18, 18, 18],
  "initial": {"i": 0, "l": 0}
}
"#;
