import type { ReportPayload, SessionPayload } from '../src/types.js';

/** A real baseline session payload, frozen (gold-stocks model, no evidence). */
export const baselineSession: SessionPayload = {
  session_id: '8cb060d765e6',
  model_id: 'gold_stocks',
  model_hash: 'cd46cea96fb9',
  evidence_count: 0,
  state_hash: '43fe042f4e15',
  created_at: '2026-08-14T04:21:40+00:00',
  evidence: [],
  report: {
    variables: ['P', 'S1', 'S2', 'S3'],
    mean: [0.034249999999999996, 0.04, 0.032499999999999994, 0.034999999999999996],
    covariance: [
      [0.00167893, 0.0021260000000000003, 0.0016632999999999997, 0.0008941999999999996],
      [0.0021260000000000003, 0.007568000000000002, 0.0007479999999999982, 0.0008880000000000007],
      [0.0016632999999999997, 0.0007479999999999982, 0.0020810000000000017, 0.0005699999999999998],
      [0.0008941999999999996, 0.0008880000000000007, 0.0005699999999999998, 0.0031760000000000013],
    ],
    assets: {
      P: { mean: 0.034249999999999996, sd: 0.04097474832137472 },
      S1: { mean: 0.04, sd: 0.0869942526837262 },
      S2: { mean: 0.032499999999999994, sd: 0.04561797891182819 },
      S3: { mean: 0.034999999999999996, sd: 0.05635601121442149 },
    },
    riskless_rate: 0.0,
    tangency_weights: {
      S1: 0.1341470731365871,
      S2: 0.5266687554580785,
      S3: 0.3391841714053344,
    },
    current_weights: { S1: 0.2, S2: 0.7, S3: 0.1 },
  },
};

/** The same session's report after committing G ~ normal(0.04, 0.005). */
export const updatedReport: ReportPayload = {
  variables: ['P', 'S1', 'S2', 'S3'],
  mean: [0.07533235294117649, 0.09082352941176473, 0.07061764705882355, 0.07735294117647058],
  covariance: [
    [0.0015903747058823527, 0.002016447058823528, 0.0015811352941176471, 0.0008029058823529415],
    [0.002016447058823528, 0.00743247058823529, 0.0006463529411764679, 0.0007750588235294108],
    [0.0015811352941176471, 0.0006463529411764679, 0.002004764705882355, 0.00048529411764705924],
    [0.0008029058823529415, 0.0007750588235294108, 0.00048529411764705924, 0.0030818823529411765],
  ],
  assets: {
    P: { mean: 0.07533235294117649, sd: 0.03987950232741568 },
    S1: { mean: 0.09082352941176473, sd: 0.08621177754944674 },
    S2: { mean: 0.07061764705882355, sd: 0.044774598891362 },
    S3: { mean: 0.07735294117647058, sd: 0.05551470393455392 },
  },
  riskless_rate: 0.0,
  tangency_weights: {
    S1: 0.14297497291099256,
    S2: 0.5152007361249724,
    S3: 0.3418242909640349,
  },
  current_weights: { S1: 0.2, S2: 0.7, S3: 0.1 },
};
