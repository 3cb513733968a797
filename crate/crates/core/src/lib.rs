pub mod builder;
pub mod io;
pub mod lp;
pub mod model;
pub mod report;
pub mod scenarios;
