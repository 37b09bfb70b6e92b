//! Assignment export: one CSV record per occupied resource.

use std::fmt::Write as _;

use geoduplex_core::scheduler::{Assignment, ResourcePlan};

use crate::error::{Error, Result};

pub const HEADER: &str = "resource,band,center_mhz,mode,dl_user,ul_user";

pub fn format_assignment(assignment: &Assignment, plan: &ResourcePlan) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(s, "{HEADER}");
    let mut slots = assignment.slots().to_vec();
    slots.sort_by_key(|x| x.resource);
    for slot in slots {
        let res = plan
            .get(slot.resource)
            .ok_or_else(|| Error::Output(format!("resource {} is outside the plan", slot.resource)))?;
        let mode = slot
            .mode()
            .ok_or_else(|| Error::Output(format!("resource {} carries no user", slot.resource)))?;
        let id = |u: Option<geoduplex_core::scheduler::UserId>| u.map(|u| u.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            res.index,
            res.band,
            res.center_mhz,
            mode,
            id(slot.dl),
            id(slot.ul)
        );
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use geoduplex_core::scheduler::{Slot, UserId};
    use geoduplex_core::LinkBudgetConfig;

    #[test]
    fn records() {
        let plan = ResourcePlan::from_config(&LinkBudgetConfig::default());
        let a = Assignment::new(vec![Slot::uplink(200, UserId(4)), Slot::full_duplex(0, UserId(1), UserId(2))]);
        let text = format_assignment(&a, &plan).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], HEADER);
        assert_eq!(lines[1], "0,f1,2100.2,FD,1,2");
        assert_eq!(lines[2], "200,f2,1900.2,HD-UL,,4");
    }
}
