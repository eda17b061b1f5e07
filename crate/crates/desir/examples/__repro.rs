use desir::consistency::{avoids_sure_loss, EPS_GRID};
use desir::previsions::{kappa1_prevision_lp, lower_prevision};
use desir::{sampling, ClosureSpec, DesirSet, Gamble, PossibilitySpace, TriState};

fn main() {
    let mut rng = sampling::rng(0x1009);
    let s2 = PossibilitySpace::with_size(2).unwrap();
    let s3 = PossibilitySpace::with_size(3).unwrap();
    let mut compared = 0;
    while compared < 200 {
        let s = if compared % 2 == 0 { &s2 } else { &s3 };
        let gens = sampling::generators_grid(s, &mut rng, 3);
        let set = DesirSet::generated(s, gens.clone(), ClosureSpec::kappa1()).unwrap();
        if avoids_sure_loss(&set, &EPS_GRID).unwrap().verdict != TriState::Yes {
            continue;
        }
        let f = sampling::gamble_grid(s, &mut rng);
        let lp = match kappa1_prevision_lp(s, &gens, &f) {
            Ok(v) => v.expect("bounded"),
            Err(e) => { println!("LP ERR at {compared}: gens={gens:?} f={f:?}\n{e}"); return; }
        };
        match lower_prevision(&set, &f, 1e-9) {
            Ok(b) => {
                if (b.estimate() - lp).abs() > 1e-6 { println!("MISMATCH {lp} vs {}", b.estimate()); return; }
            }
            Err(e) => { println!("PREV ERR at {compared}: gens={gens:?} f={f:?}\n{e}"); return; }
        }
        compared += 1;
    }
    println!("all fine");
}
