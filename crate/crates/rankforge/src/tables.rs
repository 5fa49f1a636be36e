//! Reference tables for the bundled worked examples.
//!
//! Each table is a transcription of a known-good codeword listing; the
//! `examples` machinery regenerates the same objects from scratch and diffs
//! them bit-exactly. Matrices are stored one row per string, most
//! significant column first, exactly as printed.

use crate::linalg::MatFq;

/// Builds a matrix over `F_q` from digit-string rows.
pub fn mat_from_rows(q: u32, rows: &[&str]) -> MatFq {
    let parsed: Vec<Vec<u32>> = rows
        .iter()
        .map(|r| r.chars().map(|c| c.to_digit(10).expect("digit")).collect())
        .collect();
    MatFq::from_rows(q, &parsed)
}

pub const EX1_MATRIX_CODEBOOK: [[&str; 4]; 16] = [
    ["0000", "0000", "0000", "0000"],
    ["0010", "0100", "1001", "0011"],
    ["0100", "1001", "0011", "0110"],
    ["1001", "0011", "0110", "1101"],
    ["0011", "0110", "1101", "1010"],
    ["0110", "1101", "1010", "0101"],
    ["1101", "1010", "0101", "1011"],
    ["1010", "0101", "1011", "0111"],
    ["0101", "1011", "0111", "1111"],
    ["1011", "0111", "1111", "1110"],
    ["0111", "1111", "1110", "1100"],
    ["1111", "1110", "1100", "1000"],
    ["1110", "1100", "1000", "0001"],
    ["1100", "1000", "0001", "0010"],
    ["1000", "0001", "0010", "0100"],
    ["0001", "0010", "0100", "1001"],
];

pub const EX2_GENERATORS: [[&str; 6]; 6] = [
    ["011", "001", "000", "000", "000", "100"],
    ["010", "001", "000", "000", "100", "010"],
    ["010", "001", "000", "100", "010", "001"],
    ["010", "001", "100", "010", "001", "000"],
    ["010", "101", "010", "001", "000", "000"],
    ["110", "011", "001", "000", "000", "000"],
];

pub const EX3_GENERATORS: [[&str; 6]; 6] = [
    ["011", "001", "000", "000", "000", "100"],
    ["001", "000", "000", "000", "100", "110"],
    ["000", "000", "000", "100", "110", "011"],
    ["000", "000", "100", "110", "011", "001"],
    ["000", "100", "110", "011", "001", "000"],
    ["100", "110", "011", "001", "000", "000"],
];

pub const EX4_T: [&str; 4] = ["1001", "0010", "1000", "1101"];

pub const EX4_C1_CODEBOOK: [[&str; 4]; 16] = [
    ["0000", "0000", "0000", "0000"],
    ["0110", "0011", "0001", "1000"],
    ["0101", "0010", "1001", "0100"],
    ["0011", "0001", "1000", "1100"],
    ["0100", "1010", "0101", "0010"],
    ["0010", "1001", "0100", "1010"],
    ["0001", "1000", "1100", "0110"],
    ["0111", "1011", "1101", "1110"],
    ["1100", "0110", "0011", "0001"],
    ["1010", "0101", "0010", "1001"],
    ["1001", "0100", "1010", "0101"],
    ["1111", "0111", "1011", "1101"],
    ["1000", "1100", "0110", "0011"],
    ["1110", "1111", "0111", "1011"],
    ["1101", "1110", "1111", "0111"],
    ["1011", "1101", "1110", "1111"],
];

pub const EX4_C2_CODEBOOK: [[&str; 4]; 16] = [
    ["0000", "0000", "0000", "0000"],
    ["1110", "0001", "0110", "1101"],
    ["0001", "1001", "0101", "0011"],
    ["1111", "1000", "0011", "1110"],
    ["0110", "0101", "0100", "1100"],
    ["1000", "0100", "0010", "0001"],
    ["0111", "1100", "0001", "1111"],
    ["1001", "1101", "0111", "0010"],
    ["1101", "0011", "1100", "1011"],
    ["0011", "0010", "1010", "0110"],
    ["1100", "1010", "1001", "1000"],
    ["0010", "1011", "1111", "0101"],
    ["1011", "0110", "1000", "0111"],
    ["0101", "0111", "1110", "1010"],
    ["1010", "1111", "1101", "0100"],
    ["0100", "1110", "1011", "1001"],
];

pub const EX4_GABIDULIN_U1_CODEBOOK: [[&str; 4]; 16] = [
    ["0000", "0000", "0000", "0000"],
    ["0111", "1011", "1101", "1110"],
    ["0010", "1001", "0100", "1010"],
    ["0001", "1000", "1100", "0110"],
    ["1111", "0111", "1011", "1101"],
    ["0101", "0010", "1001", "0100"],
    ["0011", "0001", "1000", "1100"],
    ["1110", "1111", "0111", "1011"],
    ["1010", "0101", "0010", "1001"],
    ["0110", "0011", "0001", "1000"],
    ["1101", "1110", "1111", "0111"],
    ["0100", "1010", "0101", "0010"],
    ["1100", "0110", "0011", "0001"],
    ["1011", "1101", "1110", "1111"],
    ["1001", "0100", "1010", "0101"],
    ["1000", "1100", "0110", "0011"],
];

pub const EX4_GABIDULIN_DUAL_CODEBOOK: [[&str; 4]; 16] = [
    ["0000", "0000", "0000", "0000"],
    ["1001", "1101", "0111", "0010"],
    ["1000", "0100", "0010", "0001"],
    ["0111", "1100", "0001", "1111"],
    ["0010", "1011", "1111", "0101"],
    ["0001", "1001", "0101", "0011"],
    ["1111", "1000", "0011", "1110"],
    ["0101", "0111", "1110", "1010"],
    ["0011", "0010", "1010", "0110"],
    ["1110", "0001", "0110", "1101"],
    ["1010", "1111", "1101", "0100"],
    ["0110", "0101", "0100", "1100"],
    ["1101", "0011", "1100", "1011"],
    ["0100", "1110", "1011", "1001"],
    ["1100", "1010", "1001", "1000"],
    ["1011", "0110", "1000", "0111"],
];

pub const EX5_STACK1: [[&str; 6]; 8] = [
    ["000", "000", "000", "000", "000", "000"],
    ["100", "110", "111", "011", "101", "010"],
    ["001", "100", "110", "111", "011", "101"],
    ["010", "001", "100", "110", "111", "011"],
    ["101", "010", "001", "100", "110", "111"],
    ["011", "101", "010", "001", "100", "110"],
    ["111", "011", "101", "010", "001", "100"],
    ["110", "111", "011", "101", "010", "001"],
];

pub const EX5_STACK2: [[&str; 6]; 8] = [
    ["000", "000", "000", "000", "000", "000"],
    ["111", "011", "001", "100", "010", "101"],
    ["001", "100", "010", "101", "110", "111"],
    ["010", "101", "110", "111", "011", "001"],
    ["110", "111", "011", "001", "100", "010"],
    ["011", "001", "100", "010", "101", "110"],
    ["100", "010", "101", "110", "111", "011"],
    ["101", "110", "111", "011", "001", "100"],
];

/// Block pattern combining the six generators of the first worked L = 7
/// code into the six of the second (each 1 stands for an I_3 block).
pub const EX3_FROM_EX2_PATTERN: [&str; 6] = [
    "110000", "011000", "001100", "000110", "000011", "000001",
];

/// Block patterns combining those generators into the seven nonzero
/// codewords of each summed stack.
pub const EX5_STACK1_PATTERN: [&str; 6] = [
    "0101110", "1011100", "0111001", "1110010", "1100101", "1001011",
];
pub const EX5_STACK2_PATTERN: [&str; 6] = [
    "1100101", "0101110", "1110010", "0010111", "0111001", "1001011",
];
