fn main() {
    use ptspec::models::{Model, ModelId};
    let model = Model::new(ModelId::HenonHeiles);
    let t0 = std::time::Instant::now();
    // E-row block indices: shell 1 -> idx0, shell2 -> idx1, shell3 -> idx2, shell4 -> idx3,4, shell5 -> idx5,6
    for (irrep, idx) in [("E", 3usize), ("E", 5), ("A1", 4), ("A2", 1)] {
        let series = ptspec::perturb::rs_series(&model, irrep, 0, idx, 8, None).unwrap();
        for s in &series {
            let cs: Vec<String> = (0..=8).map(|k| {
                s.exact().unwrap()[k].to_string()
            }).collect();
            println!("{} shell {} member {}: {}", irrep, s.shell0, s.member, cs.join(" | "));
        }
    }
    println!("elapsed {:.2?}", t0.elapsed());
}
