// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Judge rubric templates, one per category. Shipped verbatim as text
// assets; build_judge_prompt substitutes the <edit_prompt> placeholder.

#include <array>
#include <string>

#include "ivedit/bench/bench.hpp"
#include "ivedit/core/errors.hpp"

namespace ivedit::bench {

namespace {

const std::string kGlobalStyle = R"PROMPT(You are a data rater specializing in grading video style transfer edits. You will be given an input video, a reference style (image or video), and the styled result video. Your task is to evaluate the style transfer on a 5-point scale from three perspectives:

Instruction Compliance
1. Target style absent or clearly wrong.
2. Style shows in a few areas/frames only, or mixed with unrelated styles.
3. Key traits (palette, brushwork, texture) present but patchy or inconsistent across frames.
4. Style reproduced well across almost the whole video; only small local or brief temporal mismatches.
5. Full, faithful transfer: colour, texture, brushwork, and lighting all match the exemplar consistently over the entire duration and space of the video.

Consistency & Detail Fidelity
1. Major objects, layout, or overall motion lost/distorted; original scene barely recognisable.
2. Main subject recognisable, but its size, perspective, motion, or key parts are clearly wrong/missing.
3. Overall structure and motion correct; some local warping, minor omissions, or slight motion jerkiness.
4. Nearly all geometry and motion intact; only slight, non-distracting deformation.
5. All objects, spatial relations, and motion are perfectly kept; only stylistic, harmless distortion.

Visual Quality & Stability
1. Extreme flickering or "boiling" effects; the style is completely unstable frame-to-frame, making the video unwatchable.
2. Significant and distracting flickering or temporal inconsistency in style application.
3. Noticeable but tolerable flicker or texture "boiling", especially during motion.
4. Largely stable with only minor, subtle flickering visible in areas of complex motion or fine texture.
5. Perfectly stable and temporally coherent; the style appears "stuck" to the scene with no flickering.

Note: The scores for Consistency & Detail Fidelity and Visual Quality & Stability should not be higher than the Instruction Compliance score!!!

Example Response Format
Brief reasoning: A short explanation of the scores based on the criteria above, no more than 30 words.
Instruction Compliance: A number from 1 to 5.
Consistency & Detail Fidelity: A number from 1 to 5.
Visual Quality & Stability: A number from 1 to 5.
editing instruction is : <edit_prompt>.

Below are the videos before and after editing:
)PROMPT";

const std::string kBackgroundChange = R"PROMPT(You are a data rater specializing in grading video background editing. You will be given two videos (before and after editing) and the editing instruction. Your task is to evaluate the background change on a 5-point scale from three perspectives:

Instruction Compliance
1. No change, or background unrelated to prompt, or foreground also replaced/distorted.
2. Background partly replaced or wrong style/content; foreground noticeably altered.
3. Main background replaced but elements missing/extra, or faint spill onto subject edges.
4. Requested background fully present; foreground intact except minute artefacts or small prompt mismatch (e.g. colour tone).
5. Background exactly matches prompt (content, style, placement); all foreground pixels untouched.

Consistency & Detail Fidelity
1. Large tearing, posterisation, or significant temporal artifacts like flickering, jittering edges; edit area obvious at a glance.
2. Clear cut-out halos, colour-resolution gap, or obvious edge 'boiling' (instability) over time.
3. Blend acceptable but visible on closer look: slight edge blur, or minor temporal instability (e.g., shimmer).
4. Nearly invisible seams; edges are stable across motion, textures aligned, only minor issues when zoomed in.
5. Indistinguishable composite: edges, textures, resolution and colour grading are perfectly continuous and stable throughout the video's duration.

Visual Quality & Stability
1. Severe mismatch: wrong horizon, conflicting light, floating subject, or background remains static during camera movement (no parallax).
2. Noticeable inconsistencies in light or scale; incorrect perspective shifts during motion.
3. Overall believable; small errors in shadow, perspective, or minor motion tracking flaws.
4. Lighting, scale, and depth well matched; background perspective and scale track convincingly with camera motion.
5. Physically flawless: foreground and new background share coherent light, shadows, perspective, and atmospheric depth throughout all subject and camera motion, enhancing overall realism.

The second and third score should no higher than first score!!!

Example Response Format:
Brief reasoning: A short explanation of the score based on the criteria above, no more than 20 words.
Instruction Compliance: A number from 1 to 5.
Consistency & Detail Fidelity: A number from 1 to 5.
Visual Quality & Stability: A number from 1 to 5.
editing instruction is : <edit_prompt>.

Below are the videos before and after editing:
)PROMPT";

const std::string kLocalChange = R"PROMPT(You are a data rater specializing in grading video replacement edits. You will be given two videos (before and after editing) and the corresponding editing instructions. Your task is to evaluate the replacement editing effect on a 5-point scale from three perspectives, paying close attention to temporal consistency (how the edit holds up over time and with motion).

Instruction Compliance
1. Target not replaced, or an unrelated object/part of the video edited.
2. Only part of the target replaced (e.g., in only a few frames), or wrong class/description used.
3. Target largely replaced but other objects altered, remnants visible across frames, or count/position clearly wrong.
4. Correct object fully replaced for the entire duration; only minor attribute errors (colour, size, etc.).
5. Perfect replacement: all and only the specified objects replaced for the entire duration; new objects' class, number, position, scale, pose, motion and detail exactly match the prompt.

Consistency & Detail Fidelity
1. Video heavily broken or new object deformed / flickers uncontrollably / jitters erratically.
2. Obvious seams/edges that flicker or move unnaturally; strong mismatch in resolution or colour that is inconsistent across frames; background not restored or is unstable.
3. Basic style similar, but lighting or palette clashes are inconsistent as the video plays; fuzzy edges, noise or minor flickering/jittering are noticeable.
4. Style almost uniform and stable; tiny temporal artefacts (e.g., edge shimmer) visible only on close, frame-by-frame inspection; casual viewers see no edit.
5. Completely seamless and temporally stable; new objects blend fully with the scene in every frame, edit area undetectable.

Visual Quality & Stability
1. Floating or sliding unnaturally (poor motion tracking), severe perspective/light errors inconsistent with camera/object movement; background heavily warped or unstable.
2. Missing or static shadows/reflections that do not move with the object/light; poor occlusion; new object's motion clearly mismatches scene motion.
3. Lighting, perspective and interactions mostly correct but with minor inconsistencies over time; motion tracking has small, tolerable drifts.
4. New object's motion is well-tracked and it interacts realistically with the scene (shadows, reflections) and preserves existing details throughout the video.
5. Physically and dynamically flawless: motion, perspective, shadows, and reflections are perfectly integrated and move correctly with the scene and camera in every frame; background untouched and stable.

The second and third score should no higher than first score!!!

Example Response Format:
Brief reasoning: A short explanation of the score based on the criteria above, no more than 20 words.
Instruction Compliance: A number from 1 to 5.
Consistency & Detail Fidelity: A number from 1 to 5.
Visual Quality & Stability: A number from 1 to 5.
editing instruction is : <edit_prompt>.

Below are the videos before and after editing:
)PROMPT";

const std::string kLocalRemove = R"PROMPT(You are a data rater specializing in grading video object removal editing. You will be given two videos (before and after editing) and the corresponding editing instructions. Your task is to evaluate the edit quality on a 5-point scale from three perspectives:

Instruction Compliance
1. No edit performed, the video is corrupted, or the edit is completely wrong.
2. Wrong object/class removed, or target only partially removed, or an unrelated object is also removed.
3. Correct object removed, but with significant errors: unintended objects are also removed, OR significant fragments/ghosting of the target remain.
4. The correct object is removed; only minor issues like a few tiny fragments remaining or tiny, unintended background items being affected.
5. Perfect: All and only the requested objects are removed as instructed; every other element is untouched.

Visual Quality & Stability
1. Video is badly broken, full of artefacts, or shows severe flickering/jittering throughout.
2. Obvious erase marks or "smudges"; the inpainted background's style, resolution, or palette strongly mismatches; the edited region jitters or appears static against a moving background.
3. General style is similar, but the inpainted background's lighting/colours clearly clash or are inconsistent across frames; noticeable temporal disharmony.
4. Style is almost uniform; minor edge issues around the removed area or slight temporal instability (e.g., minor flicker) visible only on close inspection.
5. Perfectly seamless; the removal is temporally stable and visually indistinguishable from a clean background.

Consistency & Detail Fidelity
1. Key original elements are blocked by poor inpainting; the background is heavily distorted or hallucinates incorrect structures; motion is completely wrong (e.g., a static patch in a moving scene).
2. The inpainted background visibly shifts, jitters, or is poorly reconstructed over time, failing to match the original scene's motion.
3. Background reconstruction is mostly correct and consistent; remaining flaws are small and acceptable; background changes are localized and stable.
4. No loss of original detail around the removed area; background reconstruction is clean, stable, and respects the scene's geometry and motion.
5. The background is essentially untouched and stable; the inpainted area perfectly matches the surrounding content's motion, texture, and detail over time.

The second and third score should no higher than first score!!!

Example Response Format:
Brief reasoning: A short explanation of the score based on the criteria above, no more than 20 words.
Instruction Compliance: A number from 1 to 5.
Visual Quality & Stability: A number from 1 to 5.
Consistency & Detail Fidelity: A number from 1 to 5.
editing instruction is : <edit_prompt>.

Below are the videos before and after editing:
)PROMPT";

const std::string kLocalAdd = R"PROMPT(You are a data rater specializing in grading video object addition editing. You will be given two videos (before and after editing) and the corresponding editing instructions. Your task is to evaluate the edit quality on a 5-point scale from three perspectives:

Instruction Compliance
1. No edit performed, the video is corrupted, or the edit is completely wrong.
2. Wrong object/class added, or target only partially added, or an unrelated object is also added.
3. Correct object added, but with significant errors: key attributes (e.g., position, colour, count, size) are wrong.
4. The correct object is added with main attributes correct; only minor details are off (e.g., slight colour mismatch, minor position error).
5. Perfect: All and only the requested objects are added as instructed; every other element is untouched.

Visual Quality & Stability
1. Video is badly broken, full of artefacts, or shows severe flickering/jittering throughout.
2. Obvious paste marks; style, resolution, or palette of the added object strongly mismatches; the added region jitters or appears static against a moving background.
3. General style is similar, but lighting/colours on the added object clearly clash or are inconsistent across frames; noticeable temporal disharmony.
4. Style is almost uniform; minor edge issues around the added object or slight temporal instability (e.g., minor flicker) visible only on close inspection.
5. Perfectly seamless; the edit is temporally stable and visually indistinguishable from the original video's content and motion.

Consistency & Detail Fidelity
1. Severe physical errors (e.g., the added object floats, has wrong perspective/lighting); key original elements are blocked; motion of the added object is completely wrong.
2. Contact with surfaces, occlusion by other objects, or motion of the added object is handled poorly.
3. Lighting, perspective, and motion of the added object are mostly correct and consistent with the scene; remaining flaws are small and acceptable.
4. Shadows, reflections, and material response from the added object are believable and move correctly with the scene; no loss of original detail.
5. Edit enhances overall realism: the added object has precise highlights, shadows, and motion effects that are temporally coherent and perfectly integrated.

The second and third score should no higher than first score!!!

Example Response Format:
Brief reasoning: A short explanation of the score based on the criteria above, no more than 20 words.
Instruction Compliance: A number from 1 to 5.
Visual Quality & Stability: A number from 1 to 5.
Consistency & Detail Fidelity: A number from 1 to 5.
editing instruction is : <edit_prompt>.

Below are the videos before and after editing:
)PROMPT";

const std::string kSubtitlesEdit = R"PROMPT(You are a data rater specializing in grading instruction-following subtitle edits. You will be given two videos (before and after editing) and the corresponding editing instructions. Your task is to evaluate the subtitle edit on a 5-point scale from three perspectives:

Instruction Compliance
1. Target subtitle not added/removed/replaced, or wrong subtitle affected.
2. Right action (add/remove/replace) but with incorrect content; only part of the edit is done; other subtitles are also altered.
3. Mainly correct action and content, yet with significant spelling/grammar errors, or minor unintended edits to other subtitles.
4. Correct action performed on the right subtitle; content is correct with only minor inaccuracies (e.g., small typos, punctuation errors).
5. Exactly and only the requested subtitle(s) are added/removed/replaced; content matches the prompt perfectly; zero unintended edits.

Visual Quality & Stability
1. Completely fails to follow specified attributes (e.g., wrong position, wrong color). If attributes are not specified, the chosen ones make the subtitle unreadable or are extremely disruptive.
2. Major deviation from specified attributes (e.g., requested bottom, placed on top). If not specified, chosen attributes are clearly wrong and distracting (e.g., obscures key visuals).
3. Follows the general direction of specified attributes but with significant errors (e.g., correct side but wrong exact position). If not specified, chosen attributes are acceptable but noticeably inconsistent.
4. Follows specified attributes with only minor inaccuracies (e.g., slightly off-center, minor deviation in font/color). If not specified, chosen attributes are highly appropriate with only minor flaws.
5. All specified attributes (position, font, color, etc.) are matched perfectly. If attributes are not specified, the chosen ones are perfectly consistent with existing subtitles or professional standards.

Consistency & Detail Fidelity
1. Massive collateral damage: background video is heavily corrupted/glitched, or other non-target subtitles are wrongly deleted/altered.
2. Noticeable collateral damage: visible artifacts, distortion, or color shifts in the background video; other subtitles are visibly affected.
3. Minor unintended effects: slight and localized visual artifacts in the background, or minor, non-critical changes to adjacent subtitles' appearance/timing.
4. Almost perfect preservation: only extremely subtle artifacts in the video frame, visible only upon close inspection; all other subtitles are untouched.
5. Perfect preservation: the edit is perfectly isolated; the background video and all other subtitles remain 100

The second and third score should no higher than first score!!!

Example Response Format:
Brief reasoning: A short explanation of the score based on the criteria above, no more than 2, no more than 20 words.
Instruction Compliance: A number from 1 to 5.
Visual Quality & Stability: A number from 1 to 5.
Consistency & Detail Fidelity: A number from 1 to 5.
editing instruction is : <edit_prompt>.

Below are the videos before and after editing:
)PROMPT";

const std::string kCameraMultiShot = R"PROMPT(You are a data rater specializing in grading camera shot type alteration edits. You will be given two videos (before and after editing) and the corresponding editing instructions. Your task is to evaluate the camera shot change on a 5-point scale from three perspectives:

Instruction Compliance
1. The shot type is not changed, or changed to a completely wrong type (e.g., requested close-up, but got a long shot).
2. The direction of the shot change is correct (e.g., zoomed in for a close-up), but the degree is wrong (e.g., a medium shot instead of a close-up).
3. The shot type is generally correct, but the framing is poor, cutting off important parts of the subject or being poorly centered.
4. The shot type and framing are correct, with only minor inaccuracies in composition.
5. The video is perfectly transformed into the requested shot type (long, medium, or close-up) with ideal framing of the subject.

Visual Quality & Stability
1. Massive distortion, glitches, warping, or heavy noise; the edited video is unusable.
2. Significant and distracting jitter, shimmering, or warping is visible throughout the video, making the shot feel unstable.
3. Minor but noticeable visual flaws, such as slight edge distortion or a subtle "breathing" effect in the frame.
4. The video is stable and clear, with only very slight, almost unnoticeable artifacts upon close inspection.
5. The resulting shot is perfectly stable and clear, with no digital artifacts, distortion, or jitter. It looks as if it were originally filmed with that shot type.

Consistency & Detail Fidelity
1. The subject, background, or action in the edited video is completely different from the original video; a total failure of consistency.
2. The main subject is the same, but their action, the background, or the lighting is drastically and illogically changed compared to the original video.
3. The scene is generally consistent, but there are noticeable continuity errors (e.g., an object disappears, the subject's pose changes unnaturally).
4. The subject, action, and environment are highly consistent with the original video. Original details are well-preserved with only minor, hard-to-spot discrepancies.
5. Perfect consistency; the edited video perfectly preserves the subject, lighting, background, and continuity of action from the original video, creating the illusion of the same scene captured from a different camera position.

The second and third score should no higher than first score!!!

Example Response Format:
Brief reasoning: A short explanation of the score based on the criteria above, no more than 20 words.
Instruction Compliance: A number from 1 to 5.
Visual Quality & Stability: A number from 1 to 5.
Consistency & Detail Fidelity: A number from 1 to 5.
editing instruction is : <edit_prompt>.

Below are the videos before and after editing:
)PROMPT";

const std::string kCreativeEdit = R"PROMPT(You are a data rater specializing in grading instruction-following creative video edits. You will be given two videos (before and after editing) and the corresponding editing instructions. Your task is to evaluate the creative edit on a 5-point scale from three perspectives:

Instruction Compliance
1. The instruction is completely ignored or the edit is irrelevant to the prompt.
2. The edit attempts the instruction but fundamentally fails; the core subject, style, or action is wrong or only applied for a brief moment.
3. The edit generally follows the instruction, but with major deviations in style, motion, or concept; the effect is highly inconsistent over time.
4. The edit successfully executes the instruction with only minor inaccuracies in style, motion, or detail; the result is temporally consistent.
5. The edit perfectly and creatively interprets and executes the instruction throughout the video's duration, fully achieving the intended creative goal.

Visual Quality & Stability
1. Massive flickering, strobing, or artifacts that make the video unwatchable; edited elements are completely disjointed from the scene.
2. Obvious temporal inconsistency (e.g., style flickers on/off), clear visual boundaries or seams; mismatched color/lighting between frames.
3. The edit is mostly stable, but with noticeable "boiling" or "shimmering" in textures/styles; minor jitter or softness on edges.
4. The edit is very stable and well-integrated; only slight, hard-to-spot artifacts or flickering are present, motion is smooth.
5. Perfectly stable and seamless integration; the edit feels like part of the original footage with no detectable flickering, jitter, or discontinuities.

Consistency & Detail Fidelity
1. Complete break from physical laws; added objects have no correct lighting/shadows, move unnaturally; original video details are heavily degraded.
2. Major physical inconsistencies; shadows/reflections are static or move incorrectly; motion of edits doesn't match camera movement; original background is warped.
3. Physics and lighting are generally believable but with minor flaws (e.g., a shadow is slightly off); unedited parts of the video are mostly preserved.
4. Edited elements interact realistically with the scene's lighting, motion, and perspective; original video details are well-preserved.
5. High degree of physical realism and integration; motion, lighting, and physics of the edits are indistinguishable from a real recording; original details are perfectly maintained.

The second and third score should no higher than first score!!!

Example Response Format:
Brief reasoning: A short explanation of the score based on the criteria above, no more than 20 words.
Instruction Compliance: A number from 1 to 5.
Visual Quality & Stability: A number from 1 to 5.
Consistency & Detail Fidelity: A number from 1 to 5.
editing instruction is : <edit_prompt>.

Below are the videos before and after editing:
)PROMPT";

}  // namespace

const std::string& judge_prompt_template(core::Category category) {
  switch (category) {
    case core::Category::GlobalStyle: return kGlobalStyle;
    case core::Category::BackgroundChange: return kBackgroundChange;
    case core::Category::LocalChange: return kLocalChange;
    case core::Category::LocalRemove: return kLocalRemove;
    case core::Category::LocalAdd: return kLocalAdd;
    case core::Category::SubtitlesEdit: return kSubtitlesEdit;
    case core::Category::CameraMultiShot: return kCameraMultiShot;
    case core::Category::CreativeEdit: return kCreativeEdit;
  }
  throw core::ConfigError("no judge prompt template for category");
}

std::string build_judge_prompt(core::Category category, const std::string& instruction) {
  std::string prompt = judge_prompt_template(category);
  const std::string placeholder = "<edit_prompt>";
  size_t pos = prompt.find(placeholder);
  while (pos != std::string::npos) {
    prompt.replace(pos, placeholder.size(), instruction);
    pos = prompt.find(placeholder, pos + instruction.size());
  }
  return prompt;
}

}  // namespace ivedit::bench
