pub mod gf;
pub mod numtheory;
pub mod proj3;
pub mod curves;
pub mod pgu3;
pub mod group_action;
pub mod ramification;
pub mod linpoly;
pub mod catalog;
pub mod verifier;
