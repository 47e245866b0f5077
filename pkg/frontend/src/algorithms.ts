/** Static mirror of the published algorithm registry table: name, kind,
 * claimed security level, and whether the scheme is post-quantum.  The
 * report tool only needs these three facts to group benchmark rows; it
 * never touches key material. */

export type AlgorithmKind = "kem" | "sig";

export interface AlgorithmInfo {
  kind: AlgorithmKind;
  level: 1 | 3 | 5;
  postQuantum: boolean;
  hybrid: boolean;
}

const A = (
  kind: AlgorithmKind,
  level: 1 | 3 | 5,
  postQuantum: boolean,
  hybrid = false,
): AlgorithmInfo => ({ kind, level, postQuantum, hybrid });

export const ALGORITHMS: Record<string, AlgorithmInfo> = {
  x25519: A("kem", 1, false),
  x448: A("kem", 5, false),
  secp256r1: A("kem", 1, false),
  secp384r1: A("kem", 3, false),
  secp521r1: A("kem", 5, false),
  ffdhe2048: A("kem", 1, false),
  ffdhe3072: A("kem", 3, false),
  ffdhe4096: A("kem", 5, false),
  mlkem512: A("kem", 1, true),
  mlkem768: A("kem", 3, true),
  mlkem1024: A("kem", 5, true),
  hqc128: A("kem", 1, true),
  hqc192: A("kem", 3, true),
  hqc256: A("kem", 5, true),
  x25519mlkem512: A("kem", 1, true, true),
  ed25519: A("sig", 1, false),
  ed448: A("sig", 5, false),
  "ecdsa-p256": A("sig", 1, false),
  "ecdsa-p384": A("sig", 3, false),
  "ecdsa-p521": A("sig", 5, false),
  rsa2048: A("sig", 1, false),
  rsa3072: A("sig", 3, false),
  rsa4096: A("sig", 5, false),
  mldsa44: A("sig", 1, true),
  mldsa65: A("sig", 3, true),
  mldsa87: A("sig", 5, true),
  falcon512: A("sig", 1, true),
  falcon1024: A("sig", 5, true),
  falconpadded512: A("sig", 1, true),
  sphincssha2128f: A("sig", 1, true),
  sphincssha2192f: A("sig", 3, true),
  sphincssha2128fsimple: A("sig", 1, true),
  rsa2048sha256: A("sig", 1, false),
  ecdsap256sha256: A("sig", 1, false),
};

export type DeploymentClass =
  | "legacy-only"
  | "pqc-only"
  | "hybrid-dual"
  | "hybrid-kem-legacy-sig"
  | "hybrid-legacy-kem-pqc-sig";

export function lookupAlgorithm(name: string): AlgorithmInfo | undefined {
  return ALGORITHMS[name];
}

export function suiteLevel(kem: string, ds: string): number {
  const k = ALGORITHMS[kem];
  const s = ALGORITHMS[ds];
  if (!k || !s) return 0;
  return Math.max(k.level, s.level);
}

export function deploymentClass(kem: string, ds: string): DeploymentClass {
  const k = ALGORITHMS[kem];
  const s = ALGORITHMS[ds];
  if (!k || !s) return "legacy-only";
  if (k.hybrid) return "hybrid-dual";
  if (k.postQuantum && s.postQuantum) return "pqc-only";
  if (!k.postQuantum && !s.postQuantum) return "legacy-only";
  if (k.postQuantum) return "hybrid-kem-legacy-sig";
  return "hybrid-legacy-kem-pqc-sig";
}
