use lcrm::rng::RngStream;
use lcrm::simulate::{generate_dataset, presets};

fn main() {
    // statrs erfc precision at central points
    println!("cdf(1.0)  = {:.18}", lcrm::normal::cdf(1.0));
    println!("exact     = 0.841344746068542948585"); // mpmath
    println!("cdf(-2.0) = {:.18}", lcrm::normal::cdf(-2.0));
    println!("exact     = 0.022750131948179207200");

    // zero proportions under sigma1 variants
    for (label, s1sq) in [("constraint (0.667)", None), ("unit", Some(1.0)), ("2.0", Some(2.0))] {
        let mut spec = presets::table1(2000, 31);
        spec.sigma1_sq = s1sq;
        let mut rng = RngStream::new(spec.seed, 0).rng();
        let d = generate_dataset(&mut rng, &spec).unwrap();
        println!("table1 sigma1_sq {label}: zeros_y {:.3} zeros_x {:.3}", d.zero_prop_y(), d.zero_prop_x());
    }
    for t in ["table2", "table3", "table4", "table5", "table6"] {
        let mut spec = presets::by_name(t, Some(2000), 77).unwrap();
        if t == "table6" { spec.n = 2000; }
        let mut rng = RngStream::new(spec.seed, 0).rng();
        let d = generate_dataset(&mut rng, &spec).unwrap();
        println!("{t}: zeros_y {:.3} zeros_x {:.3}", d.zero_prop_y(), d.zero_prop_x());
    }
}
