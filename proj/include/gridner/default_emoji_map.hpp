#pragma once

// Mirror of data/default_emoji_map.tsv. Keep the two in sync; the test suite
// checks that they parse to the same map.

namespace gridner {

inline constexpr const char* kDefaultEmojiMapTsv = R"tsv(# Default emoji map: <emoji sequence><TAB><description>
😀	grinning face
😃	grinning face with big eyes
😄	grinning face with smiling eyes
😁	beaming face with smiling eyes
😆	grinning squinting face
😅	grinning face with sweat
🤣	rolling on the floor laughing
😂	face with tears of joy
🙂	slightly smiling face
🙃	upside down face
😉	winking face
😊	smiling face with smiling eyes
😇	smiling face with halo
🥰	smiling face with hearts
😍	smiling face with heart eyes
😘	face blowing a kiss
😋	face savoring food
😜	winking face with tongue
🤪	zany face
🤗	hugging face
🤔	thinking face
🤐	zipper mouth face
😐	neutral face
😑	expressionless face
😶	face without mouth
😏	smirking face
😒	unamused face
🙄	face with rolling eyes
😬	grimacing face
😌	relieved face
😔	pensive face
😪	sleepy face
🤤	drooling face
😴	sleeping face
😷	face with medical mask
🤒	face with thermometer
🤕	face with head bandage
🤢	nauseated face
🤮	face vomiting
🤧	sneezing face
🥵	hot face
🥶	cold face
🥴	woozy face
😵	face with crossed out eyes
🤯	exploding head
😎	smiling face with sunglasses
😕	confused face
😟	worried face
🙁	slightly frowning face
☹️	frowning face
☹	frowning face
😮	face with open mouth
😲	astonished face
😳	flushed face
🥺	pleading face
😦	frowning face with open mouth
😧	anguished face
😨	fearful face
😰	anxious face with sweat
😥	sad but relieved face
😢	crying face
😭	loudly crying face
😱	face screaming in fear
😖	confounded face
😣	persevering face
😞	disappointed face
😓	downcast face with sweat
😩	weary face
😫	tired face
🥱	yawning face
😤	face with steam from nose
😡	enraged face
😠	angry face
🤬	face with symbols on mouth
💀	skull
💩	pile of poo
❤️	red heart
❤	red heart
💔	broken heart
💕	two hearts
💙	blue heart
💚	green heart
💜	purple heart
🖤	black heart
💯	hundred points
👍	thumbs up
👎	thumbs down
👏	clapping hands
🙏	folded hands
💪	flexed biceps
👋	waving hand
🤞	crossed fingers
🤝	handshake
🦠	microbe
💉	syringe
💊	pill
🩺	stethoscope
🌡️	thermometer
🌡	thermometer
🏥	hospital
🚑	ambulance
🧪	test tube
🔥	fire
✨	sparkles
🎉	party popper
⚠️	warning
⚠	warning
✅	check mark button
❌	cross mark
🙌	raising hands
👀	eyes
🤷	person shrugging
🤦	person facepalming
🏠	house
😿	crying cat
)tsv";

}  // namespace gridner
