//! Constraint answer set programming: the EZ language front end, a
//! grounder, the propositional ASP core, a finite-domain solver and the
//! integration schemas that combine them.

pub mod asp;
pub mod ca;
pub mod engine;
pub mod fd;
pub mod ground;
pub mod lang;
pub mod oracle;
