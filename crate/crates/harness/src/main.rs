fn main() {
    println!("vortexlab: command-line driver under construction");
}
