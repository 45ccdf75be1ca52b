pub mod bisim;
pub mod cli;
pub mod formula;
pub mod generate;
pub mod gtf;
pub mod gtff;
pub mod gtn;
pub mod ifs;
pub mod io;
pub mod report;
pub mod search;
pub mod semantics;
pub mod topology;
pub mod worldset;
