use floergrowth_core::freegroup::Endomorphism;
use floergrowth_core::intmat::IntMatrix;
use floergrowth_core::torus::lefschetz_number;

#[test]
fn library_example() -> floergrowth_core::Result<()> {
    let f = Endomorphism::parse(2, &["a b", "a"])?;
    let f3 = f.iterate(3);
    assert_eq!(f3, f.compose(&f)?.compose(&f)?);

    let a = IntMatrix::from_i64(2, 2, &[2, 1, 1, 1]);
    assert_eq!(lefschetz_number(&a, 2)?, (-5).into());
    Ok(())
}
