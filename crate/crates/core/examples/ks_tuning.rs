//! Power of the sequential wrapper on i.i.d. KS tests for a few (k, delta)
//! settings at a matched expected effort.

use mcverify::harness::tuning::{tuning_rate, TuningScenario};
use mcverify::RngStream;

fn main() -> mcverify::Result<()> {
    let runs = 200;
    let scenarios = [
        TuningScenario::new(0.0, 1.0, 1e-5),
        TuningScenario::new(0.03, 1.0, 1e-5),
        TuningScenario::new(0.0, 0.97, 1e-5),
    ];
    println!("{:<14}{:>14}{:>14}{:>14}", "", "k=1", "k=3 delta=2", "k=7 delta=4");
    for (i, sc) in scenarios.iter().enumerate() {
        let mut row = format!("{:<14}", sc.label);
        for (j, (k, delta)) in [(1usize, 1.0), (3, 2.0), (7, 4.0)].into_iter().enumerate() {
            let stream = RngStream::new(9).substream(i as u64).substream(j as u64);
            let r = tuning_rate(sc, k, delta, 10_000, runs, stream)?;
            row.push_str(&format!("{:>14.3}", r.rate));
        }
        println!("{row}");
    }
    Ok(())
}
