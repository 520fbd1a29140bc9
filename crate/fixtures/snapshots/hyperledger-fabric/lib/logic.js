/*
 * Generated by icb from intention model sha256:227b18637f6ae6a8698105774863572aca4bf28333ed6f8244e78dd64d7e3b49. Do not edit.
 */

'use strict';

const NS = 'org.icb.vehicle_auction';

/**
 * Place-bid
 * @param {org.icb.vehicle_auction.Place_bid} tx
 * @transaction
 */
async function Place_bid__process(tx) {
}

/**
 * Withdraw
 * @param {org.icb.vehicle_auction.Withdraw} tx
 * @transaction
 */
async function Withdraw__process(tx) {
}
