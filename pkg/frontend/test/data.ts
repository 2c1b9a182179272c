export const METRICS_HEADER =
  "scheme,seed,K,tx_dbm,N,period,rate_bps,move_steps,time_steps,decision_ms";

// Hand-checkable rate table. Per-seed means first, then mean/std over seeds:
//   fpa @10: seed1 (100+50)/2 = 75, seed2 85       -> mean 80, std 5
//   fpa @15: 120, 140                              -> mean 130, std 10
//   single_step @10: 200, 240                      -> mean 220, std 20
//   single_step @15: 260, 300                      -> mean 280, std 20
export const RATE_CSV = `${METRICS_HEADER}
fpa,1,30,10,10,1,100.000,0,0,0.000
fpa,1,30,10,10,2,50.000,0,0,0.000
fpa,2,30,10,10,1,85.000,0,0,0.000
fpa,1,30,15,10,1,120.000,0,0,0.000
fpa,2,30,15,10,1,140.000,0,0,0.000
single_step,1,30,10,10,1,200.000,3,1,0.000
single_step,2,30,10,10,1,240.000,1,1,0.000
single_step,1,30,15,10,1,260.000,0,0,0.000
single_step,2,30,15,10,1,300.000,2,1,0.000
`;

// Movement/time cost across two intervals:
//   single_step movement @1: seed1 (2+0)/2 = 1, seed2 4 -> mean 2.5, std 1.5
//   single_step movement @20: 1, 0                      -> mean 0.5, std 0.5
//   single_step time @1: 0.5, 1 -> 0.75; @20: 1, 0 -> 0.5 (all <= 1)
//   full_reconfig time @1: 5; @20: (7, 3) -> 5
export const COST_CSV = `${METRICS_HEADER}
single_step,1,30,23,1,1,10.000,2,1,0.000
single_step,1,30,23,1,2,10.000,0,0,0.000
single_step,2,30,23,1,1,10.000,4,1,0.000
single_step,1,30,23,20,1,10.000,1,1,0.000
single_step,2,30,23,20,1,10.000,0,0,0.000
full_reconfig,1,30,23,1,1,10.000,8,5,0.000
full_reconfig,1,30,23,20,1,10.000,12,7,0.000
full_reconfig,2,30,23,20,1,10.000,6,3,0.000
`;

export const HEAT_CSV = `gx,gy,best_rate_bps
0,0,5.000
1,0,7.000
0,1,9.000
1,1,9.000
`;
