pub mod biamalg;
pub mod cli;
pub mod error;
pub mod harness;
pub mod hom;
pub mod ideal;
pub mod instances;
pub mod localization;
pub mod module;
pub mod properties;
pub mod report;
pub mod ring;
pub mod script;
