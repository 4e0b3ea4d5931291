//! Generates one function from each family and checks which classes it falls in.
//!
//! cargo run --example generate_functions

use complearn::setfn::{self, CheckMode, ClassProperty, SetFn, SetFunction};
use complearn::SubsetMask;

fn main() -> complearn::Result<()> {
    let n = 8;
    let seed = 7;
    let family: Vec<(&str, SetFunction)> = vec![
        ("coverage", setfn::gen_coverage(n, 30, 0.2, seed)?),
        ("xos", setfn::gen_xos(n, 3, seed)?),
        ("graph cut", setfn::gen_graph_cut(n, 0.4, seed)?),
        ("interaction", setfn::gen_interaction(n, 2, seed)?),
        ("2-dnf", setfn::gen_kdnf(n, 2, 4, seed)?),
    ];
    let full = SubsetMask::full(n);
    let empty = SubsetMask::empty(n);
    for (name, f) in &family {
        print!("{name:12} f(∅) = {:6.3}  f([n]) = {:7.3}", f.value(&empty), f.value(&full));
        for prop in [ClassProperty::Monotone, ClassProperty::Submodular, ClassProperty::Subadditive] {
            let ok = setfn::verify_class(f, prop, CheckMode::Exhaustive)?.passed();
            print!("  {prop:?}: {}", if ok { "yes" } else { "no" });
        }
        println!();
    }

    // functions serialize to JSON and come back identical
    let text = family[0].1.to_json()?;
    assert_eq!(SetFunction::from_json(&text)?, family[0].1);
    println!("coverage JSON is {} bytes", text.len());
    Ok(())
}
