use super::{parse_diagram, DiagramError, ModuleDiagram};

const FILES: &[(&str, &str)] = &[
    ("d4gen", include_str!("../../assets/d4gen.cdg")),
    ("d4gen2", include_str!("../../assets/d4gen2.cdg")),
    ("d3gen1", include_str!("../../assets/d3gen1.cdg")),
    ("d3gen2", include_str!("../../assets/d3gen2.cdg")),
    ("d3genEq", include_str!("../../assets/d3genEq.cdg")),
];

pub fn bundled_names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

/// Text of a bundled `.cdg` file.
pub fn bundled_source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn bundled(name: &str) -> Option<ModuleDiagram> {
    bundled_source(name).map(|t| parse_diagram(t).expect("bundled diagrams parse"))
}

/// `d3genEq` with the repeated middle vertex replaced by `a^i y0`: an
/// `a`-chain `y0 -> w1 -> ... -> wi` is inserted, `c x2` becomes `wi`, and
/// `a wi` takes over the old value of `a y0`.
pub fn stretched_three_gen_eq(i: usize) -> Result<ModuleDiagram, DiagramError> {
    let mut d = bundled("d3genEq").expect("bundled");
    if i == 0 {
        return Ok(d);
    }
    let a = d.generator_index("a").expect("a");
    let c = d.generator_index("c").expect("c");
    let y0 = d.vertex_index("y0").expect("y0");
    let x2 = d.vertex_index("x2").expect("x2");
    let bottom = d.remove_edge(a, y0).expect("a y0 is defined");
    d.remove_edge(c, x2).expect("c x2 is defined");
    let mut prev = y0;
    for j in 1..=i {
        let w = d.add_vertex(&format!("w{j}"))?;
        d.add_edge(a, prev, w)?;
        prev = w;
    }
    d.add_edge(a, prev, bottom)?;
    d.add_edge(c, x2, prev)?;
    Ok(d)
}
