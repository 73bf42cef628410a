use num_rational::Rational64;
use pertopo::corpus;
use pertopo::diagram::{bottleneck_distance, PersistenceDiagram};
use pertopo::fpgroup::Budget;
use pertopo::pi1::persistent_pi1;
use pertopo::vankampen::{build_cover_square, n_uv_relators, verify_kernel_abelianized};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A circle born at 1 and filled at 3.
    let circle = corpus::staged_circle::<Rational64>();
    let (one, three) = (Rational64::from_integer(1), Rational64::from_integer(3));
    println!("{}", persistent_pi1(&circle, &one, &one, 0)?.invariants); // Z
    println!("{}", persistent_pi1(&circle, &one, &three, 0)?.invariants); // 0

    // Van Kampen on a wedge of two circles covered by its two lobes.
    let cover = corpus::wedge_cover(corpus::staged_wedge::<f64>());
    let square = build_cover_square(&cover, &1.0, &2.0, 0, &Budget::default())?;
    println!("{}", verify_kernel_abelianized(&square, &n_uv_relators(&square)).verdict); // verified

    let a = PersistenceDiagram::<Rational64>::parse("0 4\n")?;
    let b = PersistenceDiagram::<Rational64>::parse("1 5\n")?;
    println!("{}", bottleneck_distance(&a, &b)); // 1
    Ok(())
}
