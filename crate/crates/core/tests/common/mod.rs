#![allow(dead_code)]

use nashvop::rational::{frac, int, parse_rational, solve};
use nashvop::{
    Constraint, Constraints, HPolyhedron, LinearGame, Player, QMatrix, QVector, Rational,
};

pub fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

pub fn qv(items: &[&str]) -> QVector {
    items.iter().map(|s| q(s)).collect()
}

fn rows(data: &[(&[&str], &str)]) -> HPolyhedron {
    HPolyhedron::new(
        4,
        data.iter()
            .map(|(a, b)| Constraint::le(qv(a), q(b)))
            .collect(),
    )
    .unwrap()
}

const ROW_1A: (&[&str], &str) = (&["4", "1", "-16/3", "-1/3"], "0");
const ROW_1B: (&[&str], &str) = (&["1", "2", "0", "0"], "5");
const ROW_2A: (&[&str], &str) = (&["0", "0", "4", "1"], "6");
const ROW_2B: (&[&str], &str) = (&["15", "-10", "1", "2"], "0");

pub fn boxes() -> Vec<(Rational, Rational)> {
    vec![
        (int(0), int(5)),
        (int(0), frac(5, 2)),
        (int(0), frac(3, 2)),
        (int(0), int(6)),
    ]
}

fn scalar_players() -> Vec<Player> {
    vec![
        Player::new(2, QMatrix::from_i64(&[&[-2, -1, 0, 0]])),
        Player::new(2, QMatrix::from_i64(&[&[0, 0, -2, -3]])),
    ]
}

/// Two-player generalized game with player-specific linear constraints.
pub fn generalized() -> LinearGame {
    LinearGame::new(
        scalar_players(),
        Constraints::PerPlayer(vec![rows(&[ROW_1A, ROW_1B]), rows(&[ROW_2A, ROW_2B])]),
        boxes(),
    )
}

/// Same game with each set enlarged by the other's coupling row.
pub fn generalized_hat() -> LinearGame {
    LinearGame::new(
        scalar_players(),
        Constraints::PerPlayer(vec![
            rows(&[ROW_1A, ROW_1B, ROW_2A]),
            rows(&[ROW_1A, ROW_2A, ROW_2B]),
        ]),
        boxes(),
    )
}

/// Vector-valued shared game on the intersection of both sets.
pub fn vector_shared() -> LinearGame {
    LinearGame::new(
        vec![
            Player::new(2, QMatrix::from_i64(&[&[-2, 0, 0, 0], &[0, -1, 0, 0]])),
            Player::new(2, QMatrix::from_i64(&[&[0, 0, -2, 0], &[0, 0, 0, -3]])),
        ],
        Constraints::Shared(rows(&[ROW_1A, ROW_1B, ROW_2A, ROW_2B])),
        boxes(),
    )
}

pub fn x1() -> QVector {
    qv(&["0", "0", "0", "0"])
}
pub fn x2() -> QVector {
    qv(&["0", "2", "0", "6"])
}
pub fn x3() -> QVector {
    qv(&["1", "2", "1", "2"])
}
pub fn x5() -> QVector {
    qv(&["0", "5/2", "1/8", "11/2"])
}
pub fn x6() -> QVector {
    qv(&["47/40", "153/80", "3/2", "0"])
}
pub fn x7() -> QVector {
    qv(&["0", "5/2", "3/2", "0"])
}
pub fn x8() -> QVector {
    qv(&["8/55", "78/55", "0", "6"])
}

/// Vertex where both coupling rows of player 1, the second row of player 2
/// and `x22 = 0` are tight.
pub fn x4() -> QVector {
    let a = vec![
        qv(ROW_1A.0),
        qv(ROW_1B.0),
        qv(ROW_2B.0),
        qv(&["0", "0", "0", "1"]),
    ];
    solve(&a, &qv(&[ROW_1A.1, ROW_1B.1, ROW_2B.1, "0"])).unwrap()
}

/// Published four-decimal approximation of the remaining extreme point.
pub const X4_APPROX: [f64; 4] = [1.1876, 1.9062, 1.2481, 0.0];
