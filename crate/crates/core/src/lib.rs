//! Reduced Alexander modules, longitudes and medial quandles of classical and virtual links.

pub mod corpus;
pub mod laurent;
pub mod linkdiag;
pub mod linkinv;
pub mod medialq;
pub mod modpres;
pub mod quandle;
pub mod selftest;
