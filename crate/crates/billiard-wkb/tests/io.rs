use billiard_wkb::io::{
    bessel_table_csv, field_csv, parse_spectrum_json, read_field_binary, scar_csv, spectrum_csv,
    spectrum_json, write_field_binary,
};
use billiard_wkb::oracle::bessel_zeros;
use billiard_wkb::quantize::{circle_spectrum, rectangle_spectrum};
use billiard_wkb::wavefield::{rectangle_field, scar_profile, GridSpec};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn spectrum_json_round_trips_exactly() {
    let s = circle_spectrum(0.37, 3, 4, 1).unwrap();
    let back = parse_spectrum_json(&spectrum_json(&s).unwrap()).unwrap();
    assert_eq!(s, back);
}

#[test]
fn spectrum_csv_is_deterministic_and_parsable() {
    let s = rectangle_spectrum(1.0, 1.4, 1.0, 3, 3).unwrap();
    let a = spectrum_csv(&s).unwrap();
    assert_eq!(a, spectrum_csv(&s).unwrap());
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("n,m,alpha,E0,E1,E,degenerate"));
    for (line, e) in lines.zip(&s) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 7);
        assert_eq!(cols[5].parse::<f64>().unwrap(), e.energy());
    }
}

#[test]
fn mixed_layouts_are_refused() {
    let mut s = rectangle_spectrum(1.0, 1.0, 1.0, 1, 1).unwrap();
    s.extend(circle_spectrum(1.0, 0, 1, 0).unwrap());
    assert!(spectrum_csv(&s).is_err());
}

#[test]
fn binary_field_round_trips() {
    let e = rectangle_spectrum(1.0, 1.0, 1.0, 2, 3).unwrap()[4];
    let grid = rectangle_field(&e, 1.0, 1.0, &GridSpec::new(9, 7, [0.0, 0.0, 1.0, 1.0]));
    let mut bytes = Vec::new();
    write_field_binary(&grid, &mut bytes).unwrap();
    assert_eq!(bytes.len(), 8 * (6 + 2 * 63));
    let (spec, values) = read_field_binary(&mut bytes.as_slice()).unwrap();
    assert_eq!(spec, grid.spec);
    assert_eq!(values, grid.values);
    bytes.pop();
    assert!(read_field_binary(&mut bytes.as_slice()).is_err());
}

#[test]
fn field_csv_has_one_row_per_node() {
    let e = rectangle_spectrum(1.0, 1.0, 1.0, 1, 1).unwrap()[0];
    let grid = rectangle_field(&e, 1.0, 1.0, &GridSpec::new(5, 4, [0.0, 0.0, 1.0, 1.0]));
    let csv = field_csv(&grid);
    assert_eq!(csv.lines().count(), 21);
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 6));
}

#[test]
fn small_tables() {
    let p = scar_profile(1.0, 3.0, Complex64::new(1.0, 0.0), &[0.0, 0.25]).unwrap();
    assert_eq!(scar_csv(&p).lines().count(), 3);
    let t = bessel_table_csv(&bessel_zeros(1, 2).unwrap());
    assert!(t.starts_with("m,r,zero\n1,1,3.83170597"));
}

proptest! {
    #[test]
    fn garbage_binary_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let _ = read_field_binary(&mut bytes.as_slice());
    }
}
