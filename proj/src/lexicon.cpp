#include <sstream>

#include "nlp_internal.hpp"

namespace storyeval::nlp::lex {

namespace {

WordSet split(std::string_view words) {
    WordSet out;
    std::istringstream in{std::string(words)};
    std::string w;
    while (in >> w) out.insert(w);
    return out;
}

std::unordered_map<std::string, std::string> pairs(std::string_view text) {
    // "form:base form:base ..."
    std::unordered_map<std::string, std::string> out;
    std::istringstream in{std::string(text)};
    std::string item;
    while (in >> item) {
        const auto colon = item.find(':');
        out.emplace(item.substr(0, colon), item.substr(colon + 1));
    }
    return out;
}

}  // namespace

bool contains(const WordSet& set, std::string_view word) { return set.count(std::string(word)) > 0; }

const WordSet& stopwords() {
    static const WordSet s = split(R"(
a about above across after afterwards again against all almost alone along already also although always am
among amongst amount an and another any anyhow anyone anything anyway anywhere are around as at back be became
because become becomes becoming been before beforehand behind being below beside besides between beyond both
bottom but by ca call can cannot could did do does doing done down due during each either else elsewhere empty
enough even ever every everyone everything everywhere except few first for former formerly from front full
further get give go had has have he hence her here hereafter hereby herein hereupon hers herself him himself his
how however i if in indeed into is it its itself just keep last latter latterly least less made make many may me
meanwhile might mine more moreover most mostly move much must my myself n't name namely neither never nevertheless
next no nobody none noone nor not nothing now nowhere of off often on once one only onto or other others
otherwise our ours ourselves out over own part per perhaps please put quite rather re really regarding same say
see seem seemed seeming seems serious several she should show side since so some somehow someone something
sometime sometimes somewhere still such take than that the their theirs them themselves then thence there
thereafter thereby therefore therein thereupon these they third this those though through throughout thru thus
to together too top toward towards under unless until up upon us used using various very via was we well were
what whatever when whence whenever where whereafter whereas whereby wherein whereupon wherever whether which while
whither who whoever whole whom whose why will with within without would yet you your yours yourself yourselves
'd 'll 'm 're 's 've
)");
    return s;
}

const WordSet& determiners() {
    static const WordSet s = split(
        "the a an this that these those every each some any no all both another either neither such what which "
        "whatever whichever many much few several enough half");
    return s;
}

const WordSet& personal_pronouns() {
    static const WordSet s = split(
        "i me we us you he him she her it they them myself ourselves yourself yourselves himself herself itself "
        "themselves mine ours yours hers theirs");
    return s;
}

const WordSet& possessive_pronouns() {
    static const WordSet s = split("my our your his her its their");
    return s;
}

const WordSet& other_pronouns() {
    static const WordSet s = split(
        "something anything nothing everything someone anyone everyone noone nobody somebody everybody anybody "
        "one ones oneself none");
    return s;
}

const WordSet& wh_words() {
    static const WordSet s = split("who whom whose which what whoever whatever where when why how");
    return s;
}

const WordSet& prepositions() {
    static const WordSet s = split(
        "in on at by for with about against between into through during before after above below to from up down "
        "of off over under across along among amongst around behind beneath beside besides beyond despite except "
        "inside outside near onto toward towards upon within without throughout via past like unlike per amid "
        "underneath till until since out");
    return s;
}

const WordSet& particles() {
    static const WordSet s = split("up out off down away back over around");
    return s;
}

const WordSet& coordinators() {
    static const WordSet s = split("and or but nor yet");
    return s;
}

const WordSet& subordinators() {
    static const WordSet s = split(
        "because although though while whilst if unless whether whereas once as since until till before after "
        "when whenever where wherever than that so");
    return s;
}

const WordSet& modals() {
    static const WordSet s = split("will would shall should can could may might must 'll 'd ca wo");
    return s;
}

const WordSet& be_forms() {
    static const WordSet s = split("be am is are was were been being 'm 're");
    return s;
}

const WordSet& have_forms() {
    static const WordSet s = split("have has had having 've");
    return s;
}

const WordSet& do_forms() {
    static const WordSet s = split("do does did");
    return s;
}

const WordSet& number_words() {
    static const WordSet s = split(
        "zero two three four five six seven eight nine ten eleven twelve thirteen fourteen fifteen sixteen "
        "seventeen eighteen nineteen twenty thirty forty fifty sixty seventy eighty ninety hundred thousand "
        "million billion dozen");
    return s;
}

const WordSet& interjections() {
    static const WordSet s = split(
        "oh ah wow hey hello hi yes yeah ok okay alas oops ouch hmm um uh huh bye goodbye please thanks ha haha "
        "whoa damn");
    return s;
}

const WordSet& adverbs() {
    static const WordSet s = split(R"(
very too also just only even still already always never often sometimes soon now then there here again ever
perhaps maybe quite rather almost so away back once forever together instead however therefore thus indeed
yet anyway later today tonight tomorrow yesterday nowhere somewhere anywhere everywhere elsewhere inside outside
upstairs downstairs ahead apart aside abroad alone else far fast hard well much more most less least enough
otherwise meanwhile moreover nevertheless furthermore afterwards beforehand sometime sooner twice thrice
almost nearly barely hardly merely simply really truly suddenly finally eventually quickly slowly not n't
home long straight right soon no
)");
    return s;
}

const WordSet& adjectives() {
    static const WordSet s = split(R"(
able absent abstract absurd accurate active actual afraid aggressive alive ancient angry annual anxious apparent
appropriate arcane asleep automatic available average aware awful bad bare basic beautiful big bitter black blank
blind blonde blue bold bored boring brave brief bright brilliant broad broken brown busy bustling calm capable
careful casual central certain cheap cheerful chief civil clean clear clever close cold comfortable common
complete complex confident conscious constant content cool correct crazy creative critical cruel curious
current cute daily dangerous dark dead deaf dear deep delicate desperate different difficult digital direct
dirty distant divine double dry due dull dusty eager early easy economic elderly electric elegant emotional
empty endless enormous entire equal essential eternal evil exact excellent excited exciting existing
expensive extra extraordinary extreme fair faithful false familiar famous fancy fantastic far fast fat fatal
favorite fearful federal fellow female fierce final fine firm flat foolish foreign formal former fortunate free
fresh friendly frightened frozen full funny furious future general gentle genuine giant glad global gloomy
golden good gorgeous grand grateful great green grey gray grim guilty handsome happy hard harsh healthy heavy
helpful helpless hidden high hollow holy honest hopeful horrible hot huge human humble hungry ill illegal
immense important impossible independent infamous infinite initial innocent intense interesting internal
invisible jealous joint joyful junior key kind large late lazy leading legal lengthy light likely limited little
live lively local lone lonely long loose lost loud lovely low loyal lucky mad magic magical magnificent main
major male massive mature mean medical mental mere middle mighty mild military minor miserable modern moist
moral mortal mysterious naked narrow nasty national native natural nearby neat necessary negative nervous new
nice noble normal numerous obvious odd official okay old open opposite ordinary original other overall own
painful pale particular past patient peaceful peculiar perfect permanent personal physical plain pleasant
polite political poor popular positive possible powerful practical precious present pretty previous primary
prime private professional proper proud public pure purple quick quiet radical random rapid rare raw ready real
reasonable recent red regular relevant reluctant remarkable remote responsible rich ridiculous right rigid
rough round royal rude rural rusty sacred sad safe same scared scary secret secure senior sensitive separate
serious severe shallow sharp short shy sick significant silent silly similar simple sincere single skilled
slight slim slow small smart smooth soft solar sole solid sorry special specific spiritual splendid stable
steady steep sticky stiff still strange strict strong stupid sublime successful sudden sufficient suitable
super sure surprised suspicious sweet swift tall tender terrible thick thin tight tiny tired total tough toxic
traditional tragic tremendous true typical ugly ultimate unable unaware unfair unhappy unique united unknown
unlikely unusual upper upset urban urgent useful useless usual vague valid valuable various vast violent
virtual visible vital vivid warm weak wealthy weird wet white whole wicked wide wild willing wise wonderful
wooden worried worthy wrong young yellow overgrown forbidden enchanted mystical whimsical vibrant ethereal
quaint eerie solemn weary mundane antique illicit rebellious adventurous fateful uncharted monotonous
existential lonesome gleaming shimmering forgotten abandoned peaceful hopeless vintage postal
)");
    return s;
}

const WordSet& nouns() {
    static const WordSet s = split(R"(
time year people way day man thing woman life child world school state family student group country problem
hand part place case week company system program question work government number night point home water room
mother area money story fact month lot right study book eye job word business issue side kind head house
service friend father power hour game line end member law car city community name president team minute idea
kid body information back parent face others level office door health person art war history party result
change morning reason research girl guy moment air teacher force education foot boy age policy music market
sense nation plan college interest death experience effect class control care field development role effort
rate heart drug show leader light voice wife police mind price report decision son view relationship town
road arm difference value building action model season society tax director position player record paper space
ground form event official matter center couple site project activity star table need court oil situation
cost industry figure street image phone data picture practice piece land product doctor wall patient worker
news test movie north love support technology step baby computer type attention film tree source organization
hair window evidence population site stamp letter pump petrol diesel gloom payment organ empire station engine
tank garage village mountain cave device metal shop orb chamber counter debt shopkeeper liver routine
substance territory journey legend cell desire detective killer victim alphabet gym weight chance sibling
bartender pint ale building bone miracle witchcraft luck dog donor list cornea rule rumor sunflower seed root
fuel robin nest nozzle melody era field farmer tractor hub sentinel cache feeling forehead warmth joy sorrow
passion movement code solidarity rebel authority follower safety flame resistance freedom friend country post
understanding tool problem sentiment grandmother message dove paper whisper tome page incantation alchemist
ritual blood parchment vellum ray dawn shutter veil consequence general local church value reminder musician
note rebellion spark beacon hope future depth collection envelope mailbox postman postcard address mail
)");
    return s;
}

const WordSet& verbs() {
    static const WordSet s = split(R"(
accept achieve act add admire admit adopt advise affect afford agree aim allow alter amaze announce answer
appear apply appreciate approach argue arise arrange arrest arrive ask assume attach attack attempt attend
attract avoid awake bake ban bark bathe battle bear beat become beg begin behave believe belong bend bet bind
bite bleed bless blink block blow boil bomb book borrow bother bounce bow break breathe breed bring broadcast
brush build burn burst bury buy calculate call calm cancel care carry carve cast catch cause celebrate change
charge chase chat cheat check cheer chew choke choose chop claim clap clean clear climb cling close collapse
collect comb come comfort command comment communicate compare compete complain complete comply concentrate
concern confess confuse connect consider consist contain continue convince cook copy correct cost cough count
cover crack crash crawl create creep cross crush cry cure curl curse cut damage dance dare deal decay deceive
decide declare decorate delay delight deliver demand deny depend describe deserve design desire destroy
detect develop die dig dim disagree disappear discover dislike dive divide do doubt drag drain draw dream
dress drift drink drip drive drop drown dry dump dwell earn eat echo embark embrace emerge employ empty
enable encourage end enjoy enter entertain escape establish evaporate examine exchange excite excuse exist
expand expect experience explain explode explore express extend face fade fail fall fancy fasten fear feed
feel fetch fight fill find finish fire fit fix flap flash flee float flood flow fly fold follow fool forbid
force forget forgive form found frame freeze frighten fry fuel gain gather gaze get give glance glare glow
go govern grab grant grasp greet grin grind grip groan grow growl guard guess guide hammer hand handle hang
happen harm hate haunt head heal hear heat help hide hire hit hold hop hope hover hug hum hunt hurry hurt
identify ignore imagine impress improve include increase influence inform inject injure insist inspire
instruct intend interest interrupt introduce invent invite involve iron itch jail jam join joke judge juggle
jump keep kick kill kiss kneel knit knock knot know label lack land last laugh launch lay lead lean leap learn
leave lend let lick lie lift light like limp list listen live load lock long look lose love make manage march
mark marry match matter mean measure meet melt mend mention miss mix moan move mourn multiply murder must nail
name need nest nod note notice number obey object observe obtain occur offend offer open order owe own pack
paddle paint park part pass paste pat pause pay peel perform permit phone pick pinch place plan plant play
plead please plug point poke polish pop possess post pour pray preach prefer prepare present preserve press
pretend prevent print produce promise protect prove provide pull pump punch punish push put question queue
quit race rain raise reach read realise realize receive recognise recognize record reduce reflect refuse
regret reign reject rejoice relax release rely remain remember remind remove rent repair repeat replace reply
report request rescue resist respond rest retire return reveal ride ring rinse rise risk roar rob rock roll
rot rub ruin rule run rush sacrifice sail satisfy save saw say scare scatter scold scratch scream screw scribble
search see seek seem sell send serve set settle sew shake shape share shave shine shiver shock shoot shop shout
show shrink shrug shut sigh sign sing sink sip sit ski skip slap sleep slide slip smash smell smile smoke snatch
sneeze sniff snore snow soak solve sound spare spark speak spell spend spill spin spit split spoil spray spread
spring squash squeak squeal squeeze stab stamp stand stare start starve stay steal steer step stick sting stir
stop store strap stretch strike strip stroll struggle study stuff stumble submit succeed suck suffer suggest
suit supply support suppose surprise surround survive suspect suspend swallow swear sweat sweep swell swim
swing switch sway take talk tame tap taste teach tear tease tell tempt tend terrify test thank think threaten
throw tick tickle tie tip tire toss touch tour tow trace trade train transform transport trap travel treat
tremble trick trip trot trouble trust try tug turn twist type understand undress unfasten unite unlock unpack
untie urge use vanish visit wail wait wake walk wander want warn wash waste watch water wave wear weep weigh
welcome whip whirl whisper whistle win wink wipe wish wobble wonder work worry wrap wreck wrestle write yawn
yell zip zoom swoop savor distribute affix embolden seal outlaw unite wander stumble stamp quip lift bump
scream arrive stare hope comply exist
)");
    return s;
}

const WordSet& ly_non_adverbs() {
    static const WordSet s = split(
        "lonely lovely friendly ugly silly holy jolly elderly curly likely daily family fly reply apply supply rely "
        "ally belly jelly bully lily italy july early only costly deadly orderly timely weekly monthly yearly "
        "nightly hourly kindly sly wobbly chilly hilly smelly woolly bubbly cuddly ghostly heavenly worldly "
        "comply multiply assembly anomaly monopoly rally tally");
    return s;
}

const WordSet& abbreviations() {
    static const WordSet s = split(
        "mr. mrs. ms. dr. st. jr. sr. prof. mt. vs. etc. e.g. i.e. a.m. p.m. u.s. u.k. no. ft. lt. sgt. capt. "
        "gen. col. rev.");
    return s;
}

const std::unordered_map<std::string, std::string>& irregular_verbs() {
    static const auto m = pairs(R"(
arose:arise arisen:arise awoke:awake awoken:awake was:be were:be been:be am:be is:be are:be 'm:be 're:be
bore:bear borne:bear beat:beat beaten:beat became:become began:begin begun:begin bent:bend bet:bet bound:bind
bit:bite bitten:bite bled:bleed blew:blow blown:blow broke:break broken:break bred:breed brought:bring
built:build burnt:burn burst:burst bought:buy cast:cast caught:catch chose:choose chosen:choose clung:cling
came:come cost:cost crept:creep cut:cut dealt:deal dug:dig did:do done:do does:do drew:draw drawn:draw
dreamt:dream drank:drink drunk:drink drove:drive driven:drive dwelt:dwell ate:eat eaten:eat fell:fall
fallen:fall fed:feed felt:feel fought:fight found:find fled:flee flung:fling flew:fly flown:fly forbade:forbid
forbidden:forbid forgot:forget forgotten:forget forgave:forgive forgiven:forgive froze:freeze frozen:freeze
got:get gotten:get gave:give given:give went:go gone:go goes:go ground:grind grew:grow grown:grow hung:hang
had:have has:have 've:have heard:hear hid:hide hidden:hide hit:hit held:hold hurt:hurt kept:keep knelt:kneel
knew:know known:know laid:lay led:lead leapt:leap learnt:learn left:leave lent:lend let:let lay:lie lain:lie
lit:light lost:lose made:make meant:mean met:meet paid:pay put:put quit:quit read:read rode:ride ridden:ride
rang:ring rung:ring rose:rise risen:rise ran:run sawn:saw said:say saw:see seen:see sought:seek sold:sell
sent:send set:set sewn:sew shook:shake shaken:shake shone:shine shot:shoot showed:show shown:show shrank:shrink
shrunk:shrink shut:shut sang:sing sung:sing sank:sink sunk:sink sat:sit slept:sleep slid:slide slung:sling
smelt:smell spoke:speak spoken:speak sped:speed spelt:spell spent:spend spilt:spill spun:spin spat:spit
split:split spoilt:spoil spread:spread sprang:spring sprung:spring stood:stand stole:steal stolen:steal
stuck:stick stung:sting stank:stink strode:stride struck:strike strove:strive swore:swear sworn:swear
swept:sweep swelled:swell swollen:swell swam:swim swum:swim swung:swing took:take taken:take taught:teach
tore:tear torn:tear told:tell thought:think threw:throw thrown:throw trod:tread understood:understand
woke:wake woken:wake wore:wear worn:wear wove:weave woven:weave wept:weep won:win wound:wind withdrew:withdraw
wrote:write written:write ca:can wo:will 'll:will 'd:would n't:not 's:be
)");
    return m;
}

const std::unordered_map<std::string, std::string>& irregular_nouns() {
    static const auto m = pairs(R"(
children:child men:man women:woman feet:foot teeth:tooth geese:goose mice:mouse oxen:ox lives:life
knives:knife wives:wife wolves:wolf leaves:leaf halves:half selves:self shelves:shelf thieves:thief
loaves:loaf calves:calf elves:elf scarves:scarf phenomena:phenomenon criteria:criterion cacti:cactus
fungi:fungus data:data series:series species:species news:news bus:bus gas:gas lens:lens
)");
    return m;
}

const std::unordered_map<std::string, std::string>& irregular_adjectives() {
    static const auto m = pairs(
        "better:good best:good worse:bad worst:bad more:much most:much less:little least:little further:far "
        "farther:far furthest:far farthest:far elder:old eldest:old");
    return m;
}

}  // namespace storyeval::nlp::lex
