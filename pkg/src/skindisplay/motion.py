"""Robot gestures (offer/reach), gaze tracking, and scripted target motions.

Reach trajectories move the hand anchor along a straight task-space line
with a trapezoidal speed profile; each sample is solved by damped least
squares on the 6-DoF arm chain (shoulder 3, elbow 1, wrist 2) with joint
limits. Planning and sampling are pure; a session advances motion on its
single simulation tick.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .body import (
    BodyPartId,
    FKResult,
    Pose,
    SegmentKind,
    Side,
    Skeleton,
    forward_kinematics,
    part_anchor,
    part_anchor_normal,
)
from .geometry import (
    Transform,
    angle_between,
    capsule_capsule_distance,
    compose,
    invert,
    look_rotation,
    normalize,
    quat_angle_between,
    quat_from_axis_angle,
    quat_identity,
    quat_multiply,
    quat_slerp,
)


class PlanningError(Exception):
    """A gesture cannot be realized (unreachable target, invalid part, ...)."""


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrapezoidalProfile:
    accel_fraction: float = 0.25
    max_joint_velocity: float = 4.0  # rad/s

    def position(self, tau: float) -> float:
        """Normalized path position for normalized time tau in [0, 1]."""
        a = self.accel_fraction
        tau = min(max(tau, 0.0), 1.0)
        norm = 1.0 - a  # peak velocity = 1 / (1 - a)
        if tau < a:
            return tau * tau / (2 * a * norm)
        if tau <= 1.0 - a:
            return (tau - a / 2) / norm
        return 1.0 - (1.0 - tau) ** 2 / (2 * a * norm)


@dataclass(frozen=True)
class Trajectory:
    duration: float
    times: np.ndarray  # strictly increasing keyframe times, [0, duration]
    poses: tuple  # Pose per keyframe
    profile: TrapezoidalProfile = field(default_factory=TrapezoidalProfile)

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError("trajectory duration must be positive")
        t = np.asarray(self.times, dtype=np.float64)
        if np.any(np.diff(t) <= 0):
            raise ValueError("keyframe times must be strictly increasing")
        object.__setattr__(self, "times", t)

    @property
    def final_pose(self) -> Pose:
        return self.poses[-1]


def sample_trajectory(traj: Trajectory, t: float) -> Pose:
    """Pose at time t; clamped to the endpoints, slerped between keyframes."""
    times = traj.times
    if t <= times[0]:
        return traj.poses[0]
    if t >= times[-1]:
        return traj.poses[-1]
    i = int(np.searchsorted(times, t, side="right")) - 1
    t0, t1 = times[i], times[i + 1]
    w = (t - t0) / (t1 - t0)
    p0, p1 = traj.poses[i], traj.poses[i + 1]
    rots = np.empty_like(p0.local_rotations)
    for j in range(rots.shape[0]):
        rots[j] = quat_slerp(p0.local_rotations[j], p1.local_rotations[j], w)
    root_t = (1 - w) * p0.root.translation + w * p1.root.translation
    root_q = quat_slerp(p0.root.rotation, p1.root.rotation, w)
    return Pose(Transform(rotation=root_q, translation=root_t), rots)


def hold_trajectory(pose: Pose, duration: float = 0.01) -> Trajectory:
    """A no-motion trajectory holding `pose` (used for the neutral gesture)."""
    return Trajectory(duration=duration, times=np.array([0.0, duration]),
                      poses=(pose, pose))


# ---------------------------------------------------------------------------
# Gestures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Offer:
    part: BodyPartId


@dataclass(frozen=True)
class Reach:
    hand_side: Side
    target_part: BodyPartId

    def __post_init__(self):
        if self.hand_side not in (Side.LEFT, Side.RIGHT):
            raise ValueError("reach hand must be left or right")


@dataclass(frozen=True)
class Neutral:
    pass


GestureKind = Union[Offer, Reach, Neutral]

OFFERABLE = (SegmentKind.PALM, SegmentKind.FOREARM, SegmentKind.UPPER_ARM,
             SegmentKind.SHOULDER)


# ---------------------------------------------------------------------------
# Arm inverse kinematics (damped least squares)
# ---------------------------------------------------------------------------

# arm parameter vector: shoulder rotvec (3), elbow hinge about local x (1),
# wrist hinges about local x and z (2)
_ELBOW_LIMITS = (-2.4, 0.05)
_WRIST_TWIST_LIMIT = 1.57
_WRIST_FLEX_LIMIT = 1.2
_SHOULDER_LIMIT = 2.6


def _arm_joint_names(side: Side):
    p = "l" if side is Side.LEFT else "r"
    return (f"{p}_shoulder", f"{p}_elbow", f"{p}_wrist")


def _clamp_params(q: np.ndarray) -> np.ndarray:
    q = q.copy()
    sh_norm = np.linalg.norm(q[:3])
    if sh_norm > _SHOULDER_LIMIT:
        q[:3] *= _SHOULDER_LIMIT / sh_norm
    q[3] = np.clip(q[3], *_ELBOW_LIMITS)
    q[4] = np.clip(q[4], -_WRIST_TWIST_LIMIT, _WRIST_TWIST_LIMIT)
    q[5] = np.clip(q[5], -_WRIST_FLEX_LIMIT, _WRIST_FLEX_LIMIT)
    return q


def arm_params_to_quats(q: np.ndarray):
    from .geometry import quat_from_rotvec
    shoulder = quat_from_rotvec(q[:3])
    elbow = quat_from_axis_angle([1, 0, 0], float(q[3]))
    # wrist: pronation twist about the forearm axis, then flexion
    wrist = quat_multiply(quat_from_axis_angle([0, 1, 0], float(q[4])),
                          quat_from_axis_angle([1, 0, 0], float(q[5])))
    return shoulder, elbow, wrist


def apply_arm_params(skeleton: Skeleton, pose: Pose, side: Side, q: np.ndarray) -> Pose:
    names = _arm_joint_names(side)
    quats = arm_params_to_quats(q)
    out = pose
    for name, quat in zip(names, quats):
        out = out.with_rotation(skeleton.joint_index(name), quat)
    return out


def _effector_state(skeleton: Skeleton, pose: Pose, side: Side, q: np.ndarray,
                    effector: BodyPartId):
    fk = forward_kinematics(skeleton, apply_arm_params(skeleton, pose, side, q))
    return part_anchor(effector, fk), part_anchor_normal(effector, fk)


class _ArmChain:
    """Effector anchor/normal as a function of arm parameters only.

    Avoids re-running whole-body FK inside the finite-difference Jacobian;
    agrees with forward_kinematics exactly (same compose order).
    """

    def __init__(self, skeleton: Skeleton, pose: Pose, side: Side, effector: BodyPartId):
        from .geometry import quat_rotate
        names = _arm_joint_names(side)
        idx = [skeleton.joint_index(n) for n in names]
        fk = forward_kinematics(skeleton, pose)
        parent = skeleton.joints[idx[0]].parent
        mount = fk.joint_world[parent] if parent is not None else pose.root
        self.mount_q = mount.rotation
        self.mount_t = mount.translation
        self.rest_q = [skeleton.joints[i].rest.rotation for i in idx]
        self.rest_t = [skeleton.joints[i].rest.translation for i in idx]
        seg = skeleton.segment_for(effector)
        self.eff_joint = idx.index(seg.joint)  # 0 shoulder, 1 elbow, 2 wrist
        cap = seg.capsule
        self.eff_offset = cap.center + cap.radius * seg.anchor_dir
        self.eff_normal = seg.anchor_dir

    def effector_state(self, q: np.ndarray):
        from .geometry import quat_rotate
        quats = arm_params_to_quats(q)
        wq, wt = self.mount_q, self.mount_t
        for k in range(self.eff_joint + 1):
            wt = wt + quat_rotate(wq, self.rest_t[k])
            wq = quat_multiply(quat_multiply(wq, self.rest_q[k]), quats[k])
        return wt + quat_rotate(wq, self.eff_offset), quat_rotate(wq, self.eff_normal)


_POSTURE_REF = np.array([0.0, 0.0, 0.0, -0.5, 0.0, 0.0])  # slightly flexed elbow


def solve_arm_ik(skeleton: Skeleton, pose: Pose, side: Side,
                 target_point: np.ndarray,
                 effector: Optional[BodyPartId] = None,
                 facing: Optional[np.ndarray] = None,
                 q_init: Optional[np.ndarray] = None,
                 orientation_weight: float = 0.35,
                 damping: float = 0.06,
                 max_iters: int = 24,
                 tol: float = 5e-4,
                 posture_bias: float = 0.02,
                 columns: Optional[tuple] = None):
    """Damped-least-squares IK for one arm.

    Position is the hard objective, with a weak pull toward a natural
    slightly-flexed posture. When `facing` is given, a wrist-only pass then
    tilts the anchor normal toward that direction as far as the remaining
    slack allows, followed by a position re-polish. Returns
    (solved q, position error).
    """
    actor = skeleton.segments[0].part.actor
    effector = effector or BodyPartId(actor, side, SegmentKind.PALM)
    target_point = np.asarray(target_point, dtype=np.float64)
    q = np.zeros(6) if q_init is None else q_init.copy()
    eps = 1e-4
    chain = _ArmChain(skeleton, pose, side, effector)

    def residual(qv, weight):
        anchor, nrm = chain.effector_state(qv)
        rows = [target_point - anchor]
        if weight > 0 and facing is not None:
            rows.append(weight * (facing - nrm))
        rows.append(posture_bias * (_POSTURE_REF - qv))
        return np.concatenate(rows), anchor

    def dls(qv, weight, iters, columns):
        e, anchor = residual(qv, weight)
        for _ in range(iters):
            if np.linalg.norm(target_point - anchor) < tol and weight == 0:
                break
            m = e.shape[0]
            J = np.zeros((m, 6))
            for k in columns:
                dq = qv.copy()
                dq[k] += eps
                ek, _ = residual(_clamp_params(dq), weight)
                J[:, k] = (e - ek) / eps  # d(residual)/dq, residual = target - fk
            JJt = J @ J.T + (damping ** 2) * np.eye(m)
            step = J.T @ np.linalg.solve(JJt, e)
            step_norm = np.linalg.norm(step)
            if step_norm > 0.3:
                step *= 0.3 / step_norm
            qv = _clamp_params(qv + step)
            e, anchor = residual(qv, weight)
        return qv, anchor

    all_cols = tuple(columns) if columns is not None else (0, 1, 2, 3, 4, 5)
    q, anchor = dls(q, 0.0, max_iters, all_cols)
    if facing is not None:
        q, _ = dls(q, orientation_weight, 10, all_cols)
        q, anchor = dls(q, 0.0, max_iters, all_cols)
    return q, float(np.linalg.norm(target_point - anchor))


# ---------------------------------------------------------------------------
# Reach planning
# ---------------------------------------------------------------------------

DEFAULT_REACH_DURATION = 2.0
DEFAULT_STOP_DISTANCE = 0.05
REACH_KEYFRAMES = 25


def arm_reach_radius(skeleton: Skeleton) -> float:
    """Shoulder-to-palm-anchor distance with the arm straight."""
    from .body import skeleton_measurements
    m = skeleton_measurements(skeleton)
    return m.upper_arm_length + m.forearm_length + m.palm_length / 2.0


def plan_reach(skeleton: Skeleton, pose: Pose, hand_side: Side,
               target_point, duration: float = DEFAULT_REACH_DURATION,
               stop_distance: float = DEFAULT_STOP_DISTANCE,
               human_fk: Optional[FKResult] = None,
               target_normal=None) -> Trajectory:
    """Straight task-space reach stopping `stop_distance` short of the target.

    The hand halts at `stop_distance` from the target point: hovering along
    `target_normal` when the target is a surface point with a known outward
    normal, otherwise pulled back along the approach line. Raises
    PlanningError when the goal is outside the arm's reach or when any
    sampled pose interpenetrates the given human body.
    """
    target_point = np.asarray(target_point, dtype=np.float64)
    hand = BodyPartId(skeleton.segments[0].part.actor, hand_side, SegmentKind.PALM)
    fk0 = forward_kinematics(skeleton, pose)
    start = part_anchor(hand, fk0)

    if target_normal is not None:
        goal = target_point + stop_distance * normalize(np.asarray(target_normal, dtype=np.float64))
    else:
        pull = target_point - start
        pull_len = float(np.linalg.norm(pull))
        goal = target_point if pull_len < 1e-9 else target_point - stop_distance * pull / pull_len
    approach = goal - start
    approach_len = float(np.linalg.norm(approach))

    shoulder = fk0.joint_world[skeleton.joint_index(_arm_joint_names(hand_side)[0])].translation
    if np.linalg.norm(goal - shoulder) > arm_reach_radius(skeleton) - 0.005:
        raise PlanningError(
            f"goal {np.round(goal, 3).tolist()} outside reach of the {hand_side.value} arm")

    profile = TrapezoidalProfile()
    taus = np.linspace(0.0, 1.0, REACH_KEYFRAMES)
    times = taus * duration
    line = goal - start
    # the palm faces the touch point it hovers over
    to_touch = target_point - goal
    if np.linalg.norm(to_touch) > 1e-9:
        facing = normalize(to_touch)
    elif approach_len > 1e-9:
        facing = approach / approach_len
    else:
        facing = None

    # solve the presentation configuration once (with the palm facing the
    # approach direction), then schedule the wrist toward it along the path
    # while tracking position with shoulder and elbow only
    q_goal, err_goal = solve_arm_ik(skeleton, pose, hand_side, goal, effector=hand,
                                    facing=facing, max_iters=40)
    if err_goal > 0.01:
        raise PlanningError(f"inverse kinematics residual {err_goal:.4f} m at the goal")

    finger_joint = skeleton.joint_index(
        ("l" if hand_side is Side.LEFT else "r") + "_fingertip")
    poses = []
    q = np.zeros(6)
    for tau in taus:
        s = profile.position(float(tau))
        w = min(1.0, 2.0 * s)  # wrist and fingers settle by mid-path
        p = start + s * line
        q = q.copy()
        q[4] = w * q_goal[4]
        q[5] = w * q_goal[5]
        q, err = solve_arm_ik(skeleton, pose, hand_side, p, effector=hand,
                              q_init=q, columns=(0, 1, 2, 3))
        if err > 0.01:
            raise PlanningError(f"inverse kinematics residual {err:.4f} m at tau={tau:.2f}")
        kf = apply_arm_params(skeleton, pose, hand_side, q)
        # curl the fingertip back so it cannot poke past the stopped palm
        kf = kf.with_rotation(finger_joint, quat_from_axis_angle([1, 0, 0], 0.7 * w))
        poses.append(kf)

    traj = Trajectory(duration=duration, times=times, poses=tuple(poses), profile=profile)
    _validate_trajectory(traj, skeleton, human_fk)
    return traj


def _validate_trajectory(traj: Trajectory, skeleton: Skeleton,
                         human_fk: Optional[FKResult], hz: float = 50.0):
    n = max(2, int(np.ceil(traj.duration * hz)) + 1)
    ts = np.linspace(0.0, traj.duration, n)
    prev = None
    for t in ts:
        p = sample_trajectory(traj, t)
        if prev is not None:
            dt = ts[1] - ts[0]
            for j in range(p.local_rotations.shape[0]):
                ang = quat_angle_between(prev.local_rotations[j], p.local_rotations[j])
                if ang / dt > traj.profile.max_joint_velocity:
                    raise PlanningError(
                        f"joint {j} angular velocity {ang / dt:.2f} rad/s exceeds bound")
        if human_fk is not None:
            d = min_interbody_distance(forward_kinematics(skeleton, p), human_fk)
            if d <= 0:
                raise PlanningError(f"interpenetration at t={t:.2f}s (clearance {d:.4f} m)")
        prev = p


def min_interbody_distance(fk_a: FKResult, fk_b: FKResult) -> float:
    """Minimum surface clearance between two bodies (negative = overlap)."""
    best = np.inf
    for ca in fk_a.segment_world.values():
        for cb in fk_b.segment_world.values():
            best = min(best, capsule_capsule_distance(ca, cb))
    return float(best)


# ---------------------------------------------------------------------------
# Offer planning
# ---------------------------------------------------------------------------

DEFAULT_OFFER_DURATION = 2.0


def mirror_pose_sagittal(skeleton: Skeleton, pose: Pose) -> Pose:
    """Reflect a pose across the body's sagittal plane (local x = 0)."""
    rots = pose.local_rotations.copy()
    for i, joint in enumerate(skeleton.joints):
        if joint.name.startswith("l_"):
            j = skeleton.joint_index("r_" + joint.name[2:])
        elif joint.name.startswith("r_"):
            j = skeleton.joint_index("l_" + joint.name[2:])
        else:
            j = i
        q = pose.local_rotations[j]
        rots[i] = np.array([q[0], q[1], -q[2], -q[3]])
    return Pose(pose.root, rots)


def plan_offer(skeleton: Skeleton, pose: Pose, part: BodyPartId,
               human_point, duration: float = DEFAULT_OFFER_DURATION) -> Trajectory:
    """Move to a pose presenting `part` toward `human_point`.

    The final pose orients the part's anchor normal within 30 degrees of the
    direction to the human. Left-side offers are the exact sagittal mirror
    of the corresponding right-side offer.
    """
    if part.segment not in OFFERABLE:
        raise PlanningError(f"{part.segment.value} is not an offerable part")
    human_point = np.asarray(human_point, dtype=np.float64)

    if part.side is Side.LEFT:
        mirrored_part = BodyPartId(part.actor, Side.RIGHT, part.segment)
        mirrored_point = human_point * np.array([-1.0, 1.0, 1.0])
        right = plan_offer(skeleton, mirror_pose_sagittal(skeleton, pose),
                           mirrored_part, mirrored_point, duration)
        final = mirror_pose_sagittal(skeleton, right.final_pose)
        return _interp_trajectory(pose, final, duration, skeleton)

    final = _offer_final_pose(skeleton, pose, part, human_point)
    return _interp_trajectory(pose, final, duration, skeleton)


def _offer_final_pose(skeleton: Skeleton, pose: Pose, part: BodyPartId,
                      human_point: np.ndarray) -> Pose:
    fk0 = forward_kinematics(skeleton, pose)
    anchor0 = part_anchor(part, fk0)
    to_human = normalize(human_point - anchor0)
    side = Side.RIGHT

    if part.segment is SegmentKind.SHOULDER:
        # the deltoid rides on the chest: turn the chest so it leads
        yaw = 0.25 if part.side is Side.RIGHT else -0.25
        chest_q = quat_from_axis_angle([0, 1, 0], yaw)
        return pose.with_rotation(skeleton.joint_index("chest"), chest_q)

    if part.segment is SegmentKind.PALM:
        shoulder = fk0.joint_world[skeleton.joint_index("r_shoulder")].translation
        pres = shoulder + 0.38 * normalize(human_point - shoulder) + np.array([0, -0.12, 0])
        q, err = solve_arm_ik(skeleton, pose, side, pres, effector=part,
                              facing=normalize(human_point - pres),
                              orientation_weight=0.35)
    elif part.segment is SegmentKind.FOREARM:
        pres = anchor0 + 0.08 * to_human + np.array([0, 0.06, 0])
        q, err = solve_arm_ik(skeleton, pose, side, pres, effector=part,
                              facing=to_human, orientation_weight=0.35)
    else:  # upper arm: small abduction keeping the anchor forward
        pres = anchor0 + 0.04 * to_human + np.array([-0.04, 0.02, 0])
        q, err = solve_arm_ik(skeleton, pose, side, pres, effector=part,
                              facing=to_human, orientation_weight=0.35)
    if err > 0.05:
        raise PlanningError(f"offer pose for {part.short()} unreachable (residual {err:.3f})")
    final = apply_arm_params(skeleton, pose, side, q)

    fk1 = forward_kinematics(skeleton, final)
    normal = part_anchor_normal(part, fk1)
    direction = normalize(human_point - part_anchor(part, fk1))
    if angle_between(normal, direction) > np.deg2rad(30):
        raise PlanningError(f"offer pose for {part.short()} does not face the human")
    return final


def _interp_trajectory(start: Pose, final: Pose, duration: float,
                       skeleton: Skeleton, n: int = REACH_KEYFRAMES) -> Trajectory:
    profile = TrapezoidalProfile()
    taus = np.linspace(0.0, 1.0, n)
    poses = []
    for tau in taus:
        w = profile.position(float(tau))
        rots = np.empty_like(start.local_rotations)
        for j in range(rots.shape[0]):
            rots[j] = quat_slerp(start.local_rotations[j], final.local_rotations[j], w)
        poses.append(Pose(start.root, rots))
    traj = Trajectory(duration=duration, times=taus * duration, poses=tuple(poses),
                      profile=profile)
    _validate_trajectory(traj, skeleton, None)
    return traj


def plan_gesture(kind: GestureKind, skeleton: Skeleton, pose: Pose,
                 human_fk: Optional[FKResult] = None,
                 duration: float = DEFAULT_REACH_DURATION,
                 stop_distance: float = DEFAULT_STOP_DISTANCE) -> Trajectory:
    """Dispatch a gesture description to its planner."""
    if isinstance(kind, Neutral):
        return hold_trajectory(pose)
    if isinstance(kind, Reach):
        if human_fk is None:
            raise PlanningError("reach gesture needs the human body")
        target = part_anchor(kind.target_part, human_fk)
        return plan_reach(skeleton, pose, kind.hand_side, target,
                          duration=duration, stop_distance=stop_distance,
                          human_fk=human_fk)
    if isinstance(kind, Offer):
        if human_fk is None:
            raise PlanningError("offer gesture needs the human body")
        chest = human_fk.capsule(next(p for p in human_fk.segment_world
                                      if p.segment is SegmentKind.CHEST)).center
        return plan_offer(skeleton, pose, kind.part, chest, duration=duration)
    raise PlanningError(f"unknown gesture {kind!r}")


# ---------------------------------------------------------------------------
# Gaze
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GazeState:
    forward: np.ndarray
    max_slew: float = 2.0  # rad/s

    def __post_init__(self):
        f = np.asarray(self.forward, dtype=np.float64)
        n = np.linalg.norm(f)
        if abs(n - 1.0) > 1e-6:
            raise ValueError("gaze forward must be a unit vector")
        object.__setattr__(self, "forward", f / n)

    def error_angle(self, head_position: np.ndarray, target_point: np.ndarray) -> float:
        return angle_between(self.forward, np.asarray(target_point) - head_position)

    def converged(self, head_position, target_point) -> bool:
        return self.error_angle(head_position, np.asarray(target_point)) < np.deg2rad(1.0)


def gaze_step(state: GazeState, head_transform: Transform, target_point,
              dt: float) -> GazeState:
    """Rotate the gaze toward the target by at most max_slew * dt."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    target_dir = normalize(np.asarray(target_point, dtype=np.float64)
                           - head_transform.translation)
    ang = angle_between(state.forward, target_dir)
    if ang < 1e-9:
        return state
    max_step = state.max_slew * dt
    if ang <= max_step:
        return GazeState(forward=target_dir, max_slew=state.max_slew)
    axis = np.cross(state.forward, target_dir)
    if np.linalg.norm(axis) < 1e-9:  # antiparallel: pick any perpendicular
        axis = np.cross(state.forward, [0.0, 1.0, 0.0])
        if np.linalg.norm(axis) < 1e-9:
            axis = np.cross(state.forward, [1.0, 0.0, 0.0])
    from .geometry import quat_rotate
    q = quat_from_axis_angle(axis, max_step)
    return GazeState(forward=normalize(quat_rotate(q, state.forward)),
                     max_slew=state.max_slew)


def head_rotation_for_gaze(skeleton: Skeleton, pose: Pose, forward) -> Pose:
    """Pose with the head joint oriented so local +Z looks along `forward`."""
    i_head = skeleton.joint_index("head")
    parent = skeleton.joints[i_head].parent
    fk = forward_kinematics(skeleton, pose)
    parent_world = fk.joint_world[parent]
    world_rot = look_rotation(forward, [0, 1, 0])
    rest = skeleton.joints[i_head].rest
    base = compose(parent_world, rest)
    local = quat_multiply(invert(base).rotation, world_rot)
    return pose.with_rotation(i_head, local)


# ---------------------------------------------------------------------------
# Scripted human target motions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LateralSinusoid:
    amplitude: float
    period: float

    def __post_init__(self):
        if self.amplitude <= 0 or self.period <= 0:
            raise ValueError("amplitude and period must be positive")


@dataclass(frozen=True)
class ApproachRecede:
    range: float
    period: float

    def __post_init__(self):
        if self.range <= 0 or self.period <= 0:
            raise ValueError("range and period must be positive")


@dataclass(frozen=True)
class Hold:
    pass


TargetMotion = Union[LateralSinusoid, ApproachRecede, Hold]


def scripted_target_motion(kind: TargetMotion, t: float) -> Transform:
    """World-space root displacement for the human at time t (C1-smooth)."""
    if isinstance(kind, Hold):
        return Transform.identity()
    if isinstance(kind, LateralSinusoid):
        dx = kind.amplitude * np.sin(2 * np.pi * t / kind.period)
        return Transform.from_translation([dx, 0.0, 0.0])
    if isinstance(kind, ApproachRecede):
        dz = -(kind.range / 2.0) * np.sin(2 * np.pi * t / kind.period)
        return Transform.from_translation([0.0, 0.0, dz])
    raise ValueError(f"unknown target motion {kind!r}")


def apply_root_offset(pose: Pose, offset: Transform) -> Pose:
    """Pre-compose a world-space offset onto the pose root."""
    return pose.with_root(compose(offset, pose.root))
