pub use critnum;
