//! Integer encodings: print the three tables, decode raw bit strings and
//! show what the constraint term charges for infeasible ones.
//!
//!     cargo run --example encodings

use fma_core::codec::{
    constraint_qubo, decode_point, encode, is_feasible, parse_bits, render_bits, CodecSpec,
    Encoding,
};

fn main() -> fma_core::Result<()> {
    let specs = [
        CodecSpec::binary(1, 2)?,
        CodecSpec::one_hot(1, 4, -2, 1.0)?,
        CodecSpec::domain_wall(1, 3, -2, 1.0)?,
    ];
    for spec in &specs {
        let (lo, hi) = spec.range();
        println!(
            "{} (d = {}, range [{lo}, {hi}], {} values)",
            spec.kind,
            spec.d,
            spec.cardinality()
        );
        for n in lo..=hi {
            println!("  {n:>3}  {}", render_bits(&encode(n, spec)?, spec.kind));
        }
    }

    println!("\nraw SA outputs, one-hot d = 4 and domain-wall d = 3:");
    for (spec, raw) in [
        (&specs[1], "0010"),
        (&specs[1], "0110"),
        (&specs[1], "0000"),
        (&specs[2], "110"),
        (&specs[2], "101"),
    ] {
        let bits = parse_bits(raw, spec.kind)?;
        let c = constraint_qubo(spec);
        let penalty = c.energy(&bits)? + c.constant;
        let decoded = match decode_point(&bits, spec) {
            Ok(p) => p.to_string(),
            Err(e) => format!("rejected: {e}"),
        };
        println!(
            "  {:<11} {raw}  feasible {:<5}  constraint {penalty}  {decoded}",
            spec.kind.name(),
            is_feasible(&bits, spec)?
        );
    }

    // The full-size H2 search space: two variables over [-32, 31].
    for kind in [Encoding::OneHot, Encoding::DomainWall] {
        let d = if kind == Encoding::OneHot { 64 } else { 63 };
        let spec = CodecSpec::new(kind, 2, d, CodecSpec::centered_offset(kind, d), 1000.0)?;
        println!(
            "\n{kind}, L = 2, d = {d}: {} bits, range {:?}",
            spec.total_bits(),
            spec.range()
        );
    }
    Ok(())
}
