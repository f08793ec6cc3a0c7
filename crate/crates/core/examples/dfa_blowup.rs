// The deterministic automaton is exact but can be exponential: on the
// family where resource `rj` lacks only tag `tj`, every nonempty subset of
// resources is reachable.

use tagnav::{adversarial, dfa::DEFAULT_STATE_LIMIT, fixtures, Dfa};

pub fn run_example(max_n: usize) -> tagnav::Result<Vec<(usize, usize)>> {
    let c = fixtures::fig1();
    let dfa = Dfa::build(&c, DEFAULT_STATE_LIMIT)?;
    println!(
        "sample collection: {} states, {} transitions",
        dfa.count_states(),
        dfa.count_transitions()
    );
    let mut sizes = Vec::new();
    for n in 2..=max_n {
        let states = Dfa::build(&adversarial(n), DEFAULT_STATE_LIMIT)?.count_states();
        println!("n = {n:>2}: {states:>5} states");
        sizes.push((n, states));
    }
    Ok(sizes)
}

#[allow(dead_code)]
fn main() -> tagnav::Result<()> {
    run_example(12).map(|_| ())
}
