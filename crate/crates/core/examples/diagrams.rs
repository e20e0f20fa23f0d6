//! The six 3×3 diagrams: corner spaces and exactness of the coordinate maps.

use twistlab::diagrams::{check_diagram_identities, DiagramSpec};

fn main() -> twistlab::Result<()> {
    for spec in DiagramSpec::all() {
        let l = spec.labels();
        println!(
            "[{}] column {}, row {}",
            spec.name(),
            spec.column_generator(),
            spec.row_generator()
        );
        println!("      {}  ══  {}", l.kernel.symbol(), l.kernel.symbol());
        println!(
            "      {} → {} → {}",
            l.middle_left.symbol(),
            l.center.symbol(),
            l.middle_right.symbol()
        );
        println!(
            "      {} → {} → {}",
            l.bottom_left.symbol(),
            l.bottom_middle.symbol(),
            l.bottom_right.symbol()
        );
        let report = check_diagram_identities(&spec, 100, 8, 7)?;
        println!("      {} identities, max deviation {}", report.checks.len(), report.max_deviation());
    }
    Ok(())
}
