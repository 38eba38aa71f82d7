fn main() {
    // System OpenBLAS provides the LAPACK and BLAS symbols used in src/lapack.rs.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
