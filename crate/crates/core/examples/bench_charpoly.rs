fn main() {
    use ptspec::models::{Model, ModelId};
    for id in [ModelId::Solvable1, ModelId::HenonHeiles, ModelId::PullenEdmonds] {
        let model = Model::new(id);
        let t0 = std::time::Instant::now();
        let cp = ptspec::charpoly::char_poly_full(&model, 8, 120).unwrap();
        println!("{:?}: dim {} in {:.2?}, odd-g zero: {}", id, cp.dim, t0.elapsed(), cp.odd_g_all_zero());
    }
}
