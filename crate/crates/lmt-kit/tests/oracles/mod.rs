#![allow(dead_code)]

pub mod fibration;
pub mod structural;
pub mod zigzag;
