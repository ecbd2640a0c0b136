mod common;

use qlstma::dataio::{
    generate_synthetic, proportional_split, read_wells, write_wells, Facies, Role, SyntheticConfig,
};

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[test]
fn synthetic_facies_medians_match_configuration() {
    let cfg = SyntheticConfig {
        seed: 2024,
        counts: [100, 60, 40],
        ..SyntheticConfig::default()
    };
    let wells = generate_synthetic(&cfg).unwrap();
    assert_eq!(wells.len(), 200);
    for f in [Facies::Channel, Facies::Sand, Facies::Mud] {
        let values: Vec<f64> = wells
            .iter()
            .filter(|w| w.facies == f)
            .flat_map(|w| w.samples.iter().map(|s| s.permeability))
            .collect();
        let target = cfg.median_md[f.code() as usize];
        let ratio = median(values) / target;
        assert!((0.5..=2.0).contains(&ratio), "{}: ratio {ratio}", f.name());
    }
}

#[test]
fn wells_csv_round_trip() {
    let wells = common::synthetic_wells([3, 2, 2], 5);
    let mut buf = Vec::new();
    write_wells(&mut buf, &wells).unwrap();
    let back = read_wells(buf.as_slice(), "memory").unwrap();
    assert_eq!(back, wells);
}

#[test]
fn default_split_is_fifty_three_to_ten() {
    let wells = generate_synthetic(&SyntheticConfig::default()).unwrap();
    assert_eq!(wells.len(), 63);
    let split = proportional_split(&wells, 10, 0).unwrap();
    assert_eq!(split.ids(Role::Train).len(), 53);
    assert_eq!(split.ids(Role::Test).len(), 10);
    let test = split.select(&wells, Role::Test).unwrap();
    let per_facies: Vec<usize> = [Facies::Channel, Facies::Sand, Facies::Mud]
        .iter()
        .map(|f| test.iter().filter(|w| w.facies == *f).count())
        .collect();
    assert_eq!(per_facies, [5, 3, 2]);
}

#[test]
fn malformed_csv_names_the_source() {
    let err = read_wells("well_id,x\nA,1\n".as_bytes(), "broken.csv").unwrap_err();
    assert!(err.to_string().contains("broken.csv"), "{err}");
}
