fn main() {
    leafavg::cli::main();
}
